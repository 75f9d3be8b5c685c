#pragma once

#include <array>
#include <span>
#include <vector>

#include "mvrelax/residual_report.hpp"
#include "mvrelax/test_functions.hpp"
#include "mvrelax/young_measure.hpp"

namespace mvrelax {

// Pieces of the parabolic boundary for Omega = (0,1):
//   initial  {0} x [0,1]    eta = (-1, 0)
//   terminal {T} x [0,1]    eta = (+1, 0)
//   left     [0,T] x {0}    eta = (0, -1)
//   right    [0,T] x {1}    eta = (0, +1)
// left and right together form the lateral boundary. Corners are sigma-null.
enum class BoundaryPart { initial, terminal, left, right };

inline constexpr std::array<BoundaryPart, 4> kBoundaryParts{BoundaryPart::initial, BoundaryPart::terminal,
                                                           BoundaryPart::left, BoundaryPart::right};

struct BoundaryDecomposition {
  [[nodiscard]] static double eta_t(BoundaryPart p);
  [[nodiscard]] static double eta_x(BoundaryPart p);
  // sigma-measure of the part: 1, 1, T, T.
  [[nodiscard]] static double measure(BoundaryPart p, double T);
};

// Cell measures along one boundary part, one per grid node on it, with the
// trapezoid weights of the surface measure.
struct BoundaryTrace {
  BoundaryPart part = BoundaryPart::initial;
  std::vector<double> t;
  std::vector<double> x;
  std::vector<double> weight;
  std::vector<CellMeasure> cells;

  // sum_k weight_k <cells_k, g(t_k, x_k, atom)>.
  template <typename G>
  [[nodiscard]] double integrate(G&& g) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < cells.size(); ++k)
      acc += weight[k] * cells[k].expect([&](const Atom& a) { return g(t[k], x[k], a); });
    return acc;
  }
};

struct OccupationLift {
  YoungField interior;
  std::array<BoundaryTrace, 4> boundary;  // indexed like kBoundaryParts

  [[nodiscard]] const BoundaryTrace& trace(BoundaryPart p) const { return boundary[static_cast<std::size_t>(p)]; }
  BoundaryTrace& trace(BoundaryPart p) { return boundary[static_cast<std::size_t>(p)]; }
};

// interior = field; initial/terminal atoms (y, dty, dxy) of sol at t = 0, T;
// lateral atoms (0, 0, dxy) at x = 0, 1. Throws GridMismatch.
[[nodiscard]] OccupationLift lift_occupation(const YoungField& field, const FieldSolution& sol);

// Same lift with the four corner nodes handed to the other adjacent part:
// the atoms at the corners of the initial/terminal traces and of the lateral
// traces are swapped.
[[nodiscard]] OccupationLift reassign_corners(const OccupationLift& lift);

struct OccupationMasses {
  double interior = 0.0;
  double initial = 0.0;
  double terminal = 0.0;
  double lateral = 0.0;
};
[[nodiscard]] OccupationMasses occupation_masses(const OccupationLift& lift);

enum class IbpDirection { time, space };

// int (d phi + z d_y phi) dmu - int phi eta dmu_boundary, z = z0 or z1.
[[nodiscard]] double occupation_ibp_residual(const OccupationLift& lift, const Polynomial& phi, IbpDirection dir);

// int phi (z0 - f) + (d_x phi + z1 d_y phi) z1 dmu - int phi z1 eta_x dmu_boundary.
[[nodiscard]] double occupation_weak_residual(const OccupationLift& lift, const PdeProblem& problem,
                                              const Polynomial& phi);

// int phi z0^2 - phi'/2 z1^2 - phi z0 f dmu + 1/2 int phi z1^2 eta_t dmu_boundary.
[[nodiscard]] double occupation_dissipation_residual(const OccupationLift& lift, const PdeProblem& problem,
                                                     const TimeTestFn& phi);

// Initial, lateral and normalization constraints:
//   occupation-ic   x^b y^c paired with the initial trace vs int x^b y0(x)^c dx
//   occupation-bc   t^a y^c on each lateral side vs int t^a 0^c dt
//   occupation-normalization  pure (t,x) monomials of every measure vs sigma
// with b + c, a + c, a + b <= max_degree. Reference integrals use the same
// trapezoid nodes as the traces, so a lift of a solve matches them exactly.
// `initial` (Nx+2 samples) replaces problem.y0 for tabulated data.
[[nodiscard]] std::vector<ResidualReport> marginal_residuals(const OccupationLift& lift, const PdeProblem& problem,
                                                             int max_degree, double tolerance,
                                                             std::span<const double> initial = {});

// IBP (both directions) and weak residuals for every monomial t^a x^b y^c of
// degree <= max_degree, and dissipation residuals for t^a, a <= max_degree.
[[nodiscard]] std::vector<ResidualReport> occupation_identity_suite(const OccupationLift& lift,
                                                                    const PdeProblem& problem, int max_degree,
                                                                    double tolerance);

}  // namespace mvrelax
