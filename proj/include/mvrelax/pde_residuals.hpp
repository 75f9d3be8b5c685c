#pragma once

#include <vector>

#include "mvrelax/pde_solver.hpp"
#include "mvrelax/test_functions.hpp"

namespace mvrelax {

// Trapezoid quadrature over the solution grid of
//   phi (v dt y + v' dx y - v f(t,x,y)).
[[nodiscard]] double weak_residual(const FieldSolution& sol, const PdeProblem& problem,
                                   const SpaceTestFn& v, const TimeTestFn& phi);

// Same with y replaced by y^2 and the source by 2 y f - 2 (dx y)^2.
[[nodiscard]] double energy_residual_m2(const FieldSolution& sol, const PdeProblem& problem,
                                        const SpaceTestFn& v, const TimeTestFn& phi);

// phi (dt y)^2 - phi'/2 (dx y)^2 - phi dt y f.
[[nodiscard]] double energy_residual_dissipation(const FieldSolution& sol, const PdeProblem& problem,
                                                 const TimeTestFn& phi);

inline constexpr double kPoincareUnitInterval = 9.869604401089358;  // pi^2

struct GronwallResult {
  std::vector<double> t;
  std::vector<double> lhs;  // ||y1(t) - y2(t)||^2
  std::vector<double> rhs;  // exp(2t(L_Y - C_omega)) ||dy0||^2
  bool ok = true;
};

struct GronwallOptions {
  double slack = 0.05;  // relative discretization allowance
  SolveOptions solve;
};

// Solves from y0 and y0 + perturbation and compares the squared L2
// distance with the exponential bound. Norms use the spatial trapezoid rule.
[[nodiscard]] GronwallResult gronwall_stability_check(const PdeProblem& problem, const SpaceTimeGrid& grid,
                                                      const Polynomial& perturbation,
                                                      double c_omega = kPoincareUnitInterval,
                                                      const GronwallOptions& opts = {});

}  // namespace mvrelax
