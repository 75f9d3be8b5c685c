#include "mvrelax/bounds.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <fmt/format.h>

#include "mvrelax/error.hpp"
#include "mvrelax/occupation.hpp"

namespace mvrelax {

PdeProblem fit_relaxation_boxes(const PdeProblem& problem, const FieldSolution& fine, double inflation) {
  if (!(inflation >= 0.0)) throw InvalidInput("bad-inflation", "box inflation must be nonnegative");
  const Interval r = fine.observed_range;
  double half = 0.5 * r.width() * (1.0 + inflation);
  if (half == 0.0) half = std::max(1e-3, inflation * std::abs(r.center()));
  PdeProblem out = problem;
  out.ybox = {r.center() - half, r.center() + half};
  out.zbox = observed_derivative_box(fine, inflation);
  out.lipschitz = estimate_lipschitz(problem.f, problem.T, out.ybox);
  return out;
}

double reference_value(const YoungField& field, const Polynomial& objective) {
  return field.grid().integrate(pair(field, objective));
}

const BoundEntry& BoundsTable::find(const std::string& id, int degree, Sense sense) const {
  for (const BoundEntry& e : entries)
    if (e.objective_id == id && e.degree == degree && e.sense == sense) return e;
  throw InvalidInput("unknown-bound", fmt::format("no {} bound for '{}' at d={}", sense_name(sense), id, degree));
}

BoundsTable bounds_report(const PdeProblem& problem, const FieldSolution& fine,
                          const std::vector<NamedObjective>& objectives, const std::vector<int>& degrees,
                          const BoundsOptions& opts) {
  const YoungField field = lift_dirac(fine);
  BoundsTable table;
  for (const NamedObjective& obj : objectives) {
    const double reference = reference_value(field, obj.objective);
    for (int d : degrees) {
      SolverOptions so = opts.solver;
      if (const auto it = opts.max_iters.find(d); it != opts.max_iters.end()) so.max_iters = it->second;
      const std::size_t first = table.entries.size();
      for (Sense sense : {Sense::min, Sense::max}) {
        const auto start = std::chrono::steady_clock::now();
        const RelaxationProblem rp = assemble(problem, d, obj.objective, sense, opts.assemble);
        const ConicSolution sol = solve(rp, so);
        BoundEntry e;
        e.objective_id = obj.id;
        e.degree = d;
        e.sense = sense;
        e.value = sol.objective;
        e.reference = reference;
        e.status = sol.status;
        e.iterations = sol.iterations;
        e.equality_residual = sol.equality_residual;
        e.psd_residual = sol.psd_residual;
        e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        table.entries.push_back(std::move(e));
      }
      const double gap = table.entries[first + 1].value - table.entries[first].value;
      table.entries[first].gap = gap;
      table.entries[first + 1].gap = gap;
    }
  }
  return table;
}

void write_bounds_csv(std::ostream& os, const BoundsTable& table) {
  os << "objective_id,d,sense,value,gap,reference\n";
  for (const BoundEntry& e : table.entries)
    os << fmt::format("{},{},{},{:.17g},{:.17g},{:.17g}\n", e.objective_id, e.degree, sense_name(e.sense), e.value,
                      e.gap, e.reference);
}

FirstMomentReport extract_first_moments(const ConicSolution& solution, const RelaxationProblem& rp,
                                        const OccupationLift& lift) {
  FirstMomentReport report;
  report.status = solution.status;
  const int top = 2 * rp.degree - 1;
  for (int k = 0; k <= top; ++k)
    for (int a = k; a >= 0; --a) {
      const int b = k - a;
      const Polynomial p = Polynomial::monomial({a, b, 1, 0, 0});
      FirstMoment m{a, b, rp.integrate(MeasureId::interior, p, solution.moments),
                    reference_value(lift.interior, p), 0.0};
      m.discrepancy = std::abs(m.value - m.reference);
      report.max_discrepancy = std::max(report.max_discrepancy, m.discrepancy);
      report.moments.push_back(m);
    }
  return report;
}

}  // namespace mvrelax
