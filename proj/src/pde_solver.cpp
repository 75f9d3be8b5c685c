#include "mvrelax/pde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <fmt/format.h>

#include "mvrelax/error.hpp"

namespace mvrelax {

namespace {

// Solves a tridiagonal system in place (Thomas algorithm). `lower[i]` couples
// row i to i-1, `upper[i]` couples row i to i+1.
void solve_tridiagonal(std::vector<double>& lower, std::vector<double>& diag,
                       std::vector<double>& upper, std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      const double m = lower[i] / diag[i - 1];
      diag[i] -= m * upper[i - 1];
      rhs[i] -= m * rhs[i - 1];
    }
    const double scale = std::abs(lower[i]) + std::abs(upper[i]) + 1.0;
    if (!(std::abs(diag[i]) > 1e-14 * scale))
      throw SingularJacobian(fmt::format("zero pivot {} at row {} of the Newton system", diag[i], i));
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

// f and df/dy evaluated at one time level, cached per node.
class Reaction {
 public:
  explicit Reaction(const Polynomial& f) : f_(f), dfdy_(f.derivative(Var::y)) {}

  [[nodiscard]] double value(double t, double x, double y) const { return f_.evaluate(t, x, y); }
  [[nodiscard]] double slope(double t, double x, double y) const { return dfdy_.evaluate(t, x, y); }

 private:
  Polynomial f_;
  Polynomial dfdy_;
};

}  // namespace

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::crank_nicolson:
      return "crank-nicolson";
    case Scheme::implicit_euler:
      return "implicit-euler";
    case Scheme::tabulated:
      return "tabulated";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "crank-nicolson" || name == "cn") return Scheme::crank_nicolson;
  if (name == "implicit-euler" || name == "ie") return Scheme::implicit_euler;
  throw InvalidInput("bad-scheme", fmt::format("unknown scheme '{}'", name));
}

Derivatives compute_derivatives(const GridArray& y, const SpaceTimeGrid& grid) {
  const int nt = grid.time_points();
  const int nx = grid.space_points();
  const double inv2dx = 1.0 / (2.0 * grid.dx());
  const double inv2dt = 1.0 / (2.0 * grid.dt());
  Derivatives d{grid.zeros(), grid.zeros()};
  for (int n = 0; n < nt; ++n) {
    d.dxy(n, 0) = (-3.0 * y(n, 0) + 4.0 * y(n, 1) - y(n, 2)) * inv2dx;
    for (int i = 1; i < nx - 1; ++i) d.dxy(n, i) = (y(n, i + 1) - y(n, i - 1)) * inv2dx;
    d.dxy(n, nx - 1) = (3.0 * y(n, nx - 1) - 4.0 * y(n, nx - 2) + y(n, nx - 3)) * inv2dx;
  }
  for (int i = 0; i < nx; ++i) {
    d.dty(0, i) = (-3.0 * y(0, i) + 4.0 * y(1, i) - y(2, i)) * inv2dt;
    for (int n = 1; n < nt - 1; ++n) d.dty(n, i) = (y(n + 1, i) - y(n - 1, i)) * inv2dt;
    d.dty(nt - 1, i) = (3.0 * y(nt - 1, i) - 4.0 * y(nt - 2, i) + y(nt - 3, i)) * inv2dt;
  }
  return d;
}

FieldSolution solve(const PdeProblem& problem, const SpaceTimeGrid& grid, const SolveOptions& opts) {
  std::vector<double> initial(static_cast<std::size_t>(grid.space_points()));
  for (int i = 1; i <= grid.nx(); ++i) initial[static_cast<std::size_t>(i)] = problem.y0.evaluate(0.0, grid.x(i));
  return solve(problem, grid, initial, opts);
}

FieldSolution solve(const PdeProblem& problem, const SpaceTimeGrid& grid,
                    std::span<const double> initial, const SolveOptions& opts) {
  if (!(opts.newton_tol > 0.0)) throw InvalidInput("bad-solver-options", "newton_tol must be positive");
  if (opts.scheme == Scheme::tabulated)
    throw InvalidInput("bad-scheme", "'tabulated' is not a time-stepping scheme");
  if (std::abs(grid.horizon() - problem.T) > 1e-14 * problem.T)
    throw GridMismatch("solve: grid horizon differs from problem T");
  const int npts = grid.space_points();
  if (static_cast<int>(initial.size()) != npts)
    throw InvalidInput("bad-initial-data", fmt::format("expected {} initial samples, got {}", npts, initial.size()));
  if (initial.front() != 0.0 || initial.back() != 0.0)
    throw InvalidInput("ic-boundary-violation", "initial samples must vanish at x=0 and x=1");

  const int m = grid.nx();
  const double dt = grid.dt();
  const double inv_dx2 = 1.0 / (grid.dx() * grid.dx());
  // theta-method weight on the new level: 1/2 for CN, 1 for implicit Euler.
  const double theta = opts.scheme == Scheme::crank_nicolson ? 0.5 : 1.0;
  const Reaction reaction(problem.f);

  FieldSolution sol{grid, grid.zeros(), {}, {}, opts.scheme, false, {}, 0};
  for (int i = 0; i < npts; ++i) sol.y(0, i) = initial[static_cast<std::size_t>(i)];

  std::vector<double> u(static_cast<std::size_t>(m));
  std::vector<double> explicit_part(static_cast<std::size_t>(m));
  std::vector<double> lower(static_cast<std::size_t>(m)), diag(static_cast<std::size_t>(m)),
      upper(static_cast<std::size_t>(m)), rhs(static_cast<std::size_t>(m));

  auto laplacian = [&](const auto& v, int k) {
    const double left = k > 0 ? v[static_cast<std::size_t>(k - 1)] : 0.0;
    const double right = k + 1 < m ? v[static_cast<std::size_t>(k + 1)] : 0.0;
    return (left - 2.0 * v[static_cast<std::size_t>(k)] + right) * inv_dx2;
  };

  for (int n = 0; n < grid.nt(); ++n) {
    const double t_old = grid.t(n);
    const double t_new = grid.t(n + 1);
    for (int k = 0; k < m; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      u[kk] = sol.y(n, k + 1);
    }
    // y^n + (1-theta) dt (A y^n + f(t_n, y^n)) is fixed during the step.
    for (int k = 0; k < m; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      const double x = grid.x(k + 1);
      explicit_part[kk] = u[kk];
      if (theta < 1.0)
        explicit_part[kk] += (1.0 - theta) * dt * (laplacian(u, k) + reaction.value(t_old, x, u[kk]));
    }

    double res_norm = std::numeric_limits<double>::infinity();
    int iter = 0;
    for (;; ++iter) {
      res_norm = 0.0;
      for (int k = 0; k < m; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        const double x = grid.x(k + 1);
        const double r = u[kk] - explicit_part[kk] - theta * dt * (laplacian(u, k) + reaction.value(t_new, x, u[kk]));
        rhs[kk] = -r;
        res_norm = std::max(res_norm, std::abs(r));
        diag[kk] = 1.0 + theta * dt * (2.0 * inv_dx2 - reaction.slope(t_new, x, u[kk]));
        lower[kk] = k > 0 ? -theta * dt * inv_dx2 : 0.0;
        upper[kk] = k + 1 < m ? -theta * dt * inv_dx2 : 0.0;
      }
      if (!std::isfinite(res_norm))
        throw NewtonDivergence(fmt::format("non-finite Newton residual at step {} (t={})", n + 1, t_new));
      if (res_norm <= opts.newton_tol) break;
      if (iter >= opts.newton_max_iter)
        throw NewtonDivergence(fmt::format(
            "Newton residual {:.3e} above tol {:.1e} after {} iterations at step {} (t={})", res_norm,
            opts.newton_tol, iter, n + 1, t_new));
      solve_tridiagonal(lower, diag, upper, rhs);
      for (int k = 0; k < m; ++k) u[static_cast<std::size_t>(k)] += rhs[static_cast<std::size_t>(k)];
    }
    sol.newton_iterations += iter;
    for (int k = 0; k < m; ++k) sol.y(n + 1, k + 1) = u[static_cast<std::size_t>(k)];
  }

  auto d = compute_derivatives(sol.y, grid);
  sol.dty = std::move(d.dty);
  sol.dxy = std::move(d.dxy);
  sol.observed_range = {sol.y.minCoeff(), sol.y.maxCoeff()};
  sol.range_escape = !problem.ybox.contains(sol.observed_range.lo) || !problem.ybox.contains(sol.observed_range.hi);
  return sol;
}

FieldSolution tabulate_field(const SpaceTimeGrid& grid, const std::function<double(double, double)>& y) {
  FieldSolution sol{grid, grid.zeros(), {}, {}, Scheme::tabulated, false, {}, 0};
  for (int n = 0; n < grid.time_points(); ++n)
    for (int i = 1; i <= grid.nx(); ++i) sol.y(n, i) = y(grid.t(n), grid.x(i));
  auto d = compute_derivatives(sol.y, grid);
  sol.dty = std::move(d.dty);
  sol.dxy = std::move(d.dxy);
  sol.observed_range = {sol.y.minCoeff(), sol.y.maxCoeff()};
  return sol;
}

PdeProblem enlarge_state_box(const PdeProblem& problem, const FieldSolution& sol, double inflation) {
  const Interval r = sol.observed_range;
  double half = 0.5 * r.width() * (1.0 + inflation);
  if (half == 0.0) half = std::max(1e-3, inflation * std::abs(r.center()));
  PdeProblem out = problem;
  out.ybox.lo = std::min(problem.ybox.lo, r.center() - half);
  out.ybox.hi = std::max(problem.ybox.hi, r.center() + half);
  out.lipschitz = std::max(problem.lipschitz, estimate_lipschitz(problem.f, problem.T, out.ybox));
  return out;
}

DerivativeBox observed_derivative_box(const FieldSolution& sol, double inflation) {
  const double z0 = sol.dty.abs().maxCoeff();
  const double z1 = sol.dxy.abs().maxCoeff();
  return {std::max(z0, 1e-3) * (1.0 + inflation), std::max(z1, 1e-3) * (1.0 + inflation)};
}

}  // namespace mvrelax
