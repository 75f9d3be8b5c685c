#pragma once

#include <functional>
#include <span>
#include <string_view>

#include "mvrelax/grid.hpp"
#include "mvrelax/problem.hpp"

namespace mvrelax {

enum class Scheme { crank_nicolson, implicit_euler, tabulated };

[[nodiscard]] std::string_view scheme_name(Scheme s);
// Accepts "crank-nicolson" / "cn" and "implicit-euler" / "ie".
[[nodiscard]] Scheme parse_scheme(std::string_view name);

struct SolveOptions {
  Scheme scheme = Scheme::crank_nicolson;
  double newton_tol = 1e-12;
  int newton_max_iter = 30;
};

// Grid samples of y and its first derivatives. Boundary columns of y are
// exactly zero.
struct FieldSolution {
  SpaceTimeGrid grid;
  GridArray y;
  GridArray dty;
  GridArray dxy;
  Scheme scheme = Scheme::crank_nicolson;
  bool range_escape = false;  // some y left problem.ybox
  Interval observed_range;    // [min y, max y] over the grid
  int newton_iterations = 0;  // total over all steps
};

struct Derivatives {
  GridArray dty;
  GridArray dxy;
};

// Second-order central differences inside, second-order one-sided stencils on
// the edges of the grid (x in {0,1}, t in {0,T}).
[[nodiscard]] Derivatives compute_derivatives(const GridArray& y, const SpaceTimeGrid& grid);

// Method of lines with the 3-point Laplacian; each step solves its nonlinear
// stage by Newton with a tridiagonal Jacobian.
// Throws NewtonDivergence / SingularJacobian.
[[nodiscard]] FieldSolution solve(const PdeProblem& problem, const SpaceTimeGrid& grid,
                                  const SolveOptions& opts = {});

// Same, starting from tabulated initial samples (Nx+2 values, boundary
// entries must be zero). Used for non-polynomial validation data.
[[nodiscard]] FieldSolution solve(const PdeProblem& problem, const SpaceTimeGrid& grid,
                                  std::span<const double> initial, const SolveOptions& opts = {});

// Samples a closed-form field on the grid; derivatives come from
// compute_derivatives so tabulated and solved fields are treated alike.
[[nodiscard]] FieldSolution tabulate_field(const SpaceTimeGrid& grid,
                                           const std::function<double(double, double)>& y);

// Enlarges problem.ybox to cover the observed range inflated by
// `inflation` (fraction of its width) and re-derives L_Y.
[[nodiscard]] PdeProblem enlarge_state_box(const PdeProblem& problem, const FieldSolution& sol,
                                           double inflation = 0.2);

// Symmetric derivative box from the observed |dty|, |dxy| maxima inflated
// by `inflation`.
[[nodiscard]] DerivativeBox observed_derivative_box(const FieldSolution& sol, double inflation = 0.5);

}  // namespace mvrelax
