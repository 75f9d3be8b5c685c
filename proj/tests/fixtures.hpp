#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "mvrelax/pde_solver.hpp"
#include "mvrelax/problem.hpp"

namespace fixtures {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHorizon = 0.5;

inline mvrelax::PdeProblem make(const char* f, const char* y0, mvrelax::Interval ybox = {-1.5, 1.5},
                                double T = kHorizon) {
  mvrelax::ProblemSpec spec;
  spec.T = T;
  spec.f = mvrelax::Polynomial::parse(f);
  spec.y0 = mvrelax::Polynomial::parse(y0);
  spec.ybox = ybox;
  spec.zbox = {8.0, 8.0};
  return mvrelax::make_problem(spec);
}

// f = 0. The polynomial y0 is a placeholder; heat tests feed sin(pi x)
// through the tabulated-initial-data entry point.
inline mvrelax::PdeProblem heat() { return make("0", "x*(1-x)"); }
inline mvrelax::PdeProblem allen_cahn() { return make("y - y^3", "x*(1-x)"); }
inline mvrelax::PdeProblem zero() { return make("0", "0"); }
inline mvrelax::PdeProblem cubic_zero() { return make("y^3", "0"); }

inline double heat_exact(double t, double x) { return std::exp(-kPi * kPi * t) * std::sin(kPi * x); }
inline double heat_exact_dx(double t, double x) { return kPi * std::exp(-kPi * kPi * t) * std::cos(kPi * x); }
inline double heat_exact_dt(double t, double x) { return -kPi * kPi * heat_exact(t, x); }

inline std::vector<double> sine_samples(const mvrelax::SpaceTimeGrid& g) {
  std::vector<double> v(static_cast<std::size_t>(g.space_points()), 0.0);
  for (int i = 1; i <= g.nx(); ++i) v[static_cast<std::size_t>(i)] = std::sin(kPi * g.x(i));
  return v;
}

inline mvrelax::FieldSolution heat_solve(const mvrelax::SpaceTimeGrid& g,
                                         mvrelax::Scheme scheme = mvrelax::Scheme::crank_nicolson) {
  mvrelax::SolveOptions o;
  o.scheme = scheme;
  return mvrelax::solve(heat(), g, sine_samples(g), o);
}

inline double max_error(const mvrelax::FieldSolution& s, double (*exact)(double, double)) {
  double e = 0.0;
  for (int n = 0; n < s.grid.time_points(); ++n)
    for (int i = 0; i < s.grid.space_points(); ++i)
      e = std::max(e, std::abs(s.y(n, i) - exact(s.grid.t(n), s.grid.x(i))));
  return e;
}

inline double h2(const mvrelax::SpaceTimeGrid& g) { return g.dx() * g.dx() + g.dt() * g.dt(); }

}  // namespace fixtures
