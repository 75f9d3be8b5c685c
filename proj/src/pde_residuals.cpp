#include "mvrelax/pde_residuals.hpp"

#include <cmath>

#include "detail/integrands.hpp"
#include "mvrelax/error.hpp"

namespace mvrelax {

namespace {

template <typename Integrand>
double integrate_nodes(const FieldSolution& sol, const PdeProblem& problem, Integrand&& g) {
  const SpaceTimeGrid& grid = sol.grid;
  GridArray values = grid.zeros();
  for (int n = 0; n < grid.time_points(); ++n) {
    const double t = grid.t(n);
    for (int i = 0; i < grid.space_points(); ++i) {
      const double x = grid.x(i);
      const double y = sol.y(n, i);
      const detail::AtomValues a{y, sol.dty(n, i), sol.dxy(n, i), problem.f.evaluate(t, x, y)};
      values(n, i) = g(t, x, a);
    }
  }
  return grid.integrate(values);
}

}  // namespace

double weak_residual(const FieldSolution& sol, const PdeProblem& problem, const SpaceTestFn& v,
                     const TimeTestFn& phi) {
  return integrate_nodes(sol, problem, [&](double t, double x, const detail::AtomValues& a) {
    return detail::combine_weak(phi.value(t), v.value(x), v.derivative(x), detail::weak_dt(a),
                                detail::weak_dx(a), detail::weak_src(a));
  });
}

double energy_residual_m2(const FieldSolution& sol, const PdeProblem& problem, const SpaceTestFn& v,
                          const TimeTestFn& phi) {
  return integrate_nodes(sol, problem, [&](double t, double x, const detail::AtomValues& a) {
    return detail::combine_weak(phi.value(t), v.value(x), v.derivative(x), detail::m2_dt(a),
                                detail::m2_dx(a), detail::m2_src(a));
  });
}

double energy_residual_dissipation(const FieldSolution& sol, const PdeProblem& problem,
                                   const TimeTestFn& phi) {
  return integrate_nodes(sol, problem, [&](double t, double, const detail::AtomValues& a) {
    return detail::combine_dissipation(phi.value(t), phi.derivative(t), detail::diss_z0sq(a),
                                       detail::diss_z1sq(a), detail::diss_z0f(a));
  });
}

GronwallResult gronwall_stability_check(const PdeProblem& problem, const SpaceTimeGrid& grid,
                                        const Polynomial& perturbation, double c_omega,
                                        const GronwallOptions& opts) {
  for (Var v : {Var::t, Var::y, Var::z0, Var::z1})
    if (perturbation.depends_on(v)) throw InvalidInput("bad-perturbation", "perturbation may only depend on x");
  if (perturbation.evaluate(0.0, 0.0) != 0.0 || std::abs(perturbation.evaluate(0.0, 1.0)) > 1e-14)
    throw InvalidInput("bad-perturbation", "perturbation must vanish at x=0 and x=1");

  PdeProblem shifted = problem;
  shifted.y0 = problem.y0 + perturbation;
  const FieldSolution a = solve(problem, grid, opts.solve);
  const FieldSolution b = solve(shifted, grid, opts.solve);

  const GridArray diff2 = (a.y - b.y).square();
  const double d0 = grid.integrate_space(diff2, 0);
  GronwallResult out;
  for (int n = 0; n < grid.time_points(); ++n) {
    const double t = grid.t(n);
    const double lhs = grid.integrate_space(diff2, n);
    const double rhs = std::exp(2.0 * t * (problem.lipschitz - c_omega)) * d0;
    out.t.push_back(t);
    out.lhs.push_back(lhs);
    out.rhs.push_back(rhs);
    if (lhs > rhs * (1.0 + opts.slack)) out.ok = false;
  }
  return out;
}

}  // namespace mvrelax
