#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "mvrelax/conic_solver.hpp"
#include "mvrelax/moment_relax.hpp"
#include "mvrelax/pde_solver.hpp"
#include "mvrelax/young_measure.hpp"

namespace mvrelax {

// Problem with ybox and zbox replaced by boxes fitted to a fine solve: the
// observed y range and derivative maxima, each widened by `inflation`
// (fraction of the half width for y, of the maximum for z).
[[nodiscard]] PdeProblem fit_relaxation_boxes(const PdeProblem& problem, const FieldSolution& fine,
                                              double inflation = 0.5);

// Trapezoid value of int int <mu, objective> dx dt.
[[nodiscard]] double reference_value(const YoungField& field, const Polynomial& objective);

struct NamedObjective {
  std::string id;
  Polynomial objective;
};

struct BoundsOptions {
  AssembleOptions assemble;
  SolverOptions solver;
  // Per-degree override of solver.max_iters.
  std::map<int, int> max_iters;
};

struct BoundEntry {
  std::string objective_id;
  int degree = 0;
  Sense sense = Sense::min;
  double value = 0.0;
  double gap = 0.0;  // upper - lower at this degree
  double reference = 0.0;
  ConicStatus status = ConicStatus::max_iters;
  int iterations = 0;
  double equality_residual = 0.0;
  double psd_residual = 0.0;
  double seconds = 0.0;  // wall time of assembly and solve
};

struct BoundsTable {
  std::vector<BoundEntry> entries;  // objective-major, then degree, min before max

  [[nodiscard]] const BoundEntry& find(const std::string& id, int degree, Sense sense) const;
  [[nodiscard]] double lower(const std::string& id, int degree) const { return find(id, degree, Sense::min).value; }
  [[nodiscard]] double upper(const std::string& id, int degree) const { return find(id, degree, Sense::max).value; }
  [[nodiscard]] double gap(const std::string& id, int degree) const { return find(id, degree, Sense::min).gap; }
};

// Min and max of every objective at every degree; references come from the
// Dirac lift of `fine`. Propagates assembly and solver errors.
[[nodiscard]] BoundsTable bounds_report(const PdeProblem& problem, const FieldSolution& fine,
                                        const std::vector<NamedObjective>& objectives, const std::vector<int>& degrees,
                                        const BoundsOptions& opts = {});

// objective_id,d,sense,value,gap,reference with %.17g values.
void write_bounds_csv(std::ostream& os, const BoundsTable& table);

struct FirstMoment {
  int a = 0;  // power of t
  int b = 0;  // power of x
  double value = 0.0;      // int t^a x^b y dmu of the relaxation
  double reference = 0.0;  // same functional of the lift
  double discrepancy = 0.0;
};

struct FirstMomentReport {
  ConicStatus status = ConicStatus::max_iters;
  std::vector<FirstMoment> moments;  // graded by a + b, then by a descending
  double max_discrepancy = 0.0;
};

// int t^a x^b y over the interior measure for a + b <= 2d - 1, from the
// solver moments and from the lift. Meaningful when the solve is optimal;
// the status is carried along.
[[nodiscard]] FirstMomentReport extract_first_moments(const ConicSolution& solution, const RelaxationProblem& rp,
                                                      const OccupationLift& lift);

}  // namespace mvrelax
