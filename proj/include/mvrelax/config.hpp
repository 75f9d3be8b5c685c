#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mvrelax/io.hpp"
#include "mvrelax/moment_relax.hpp"
#include "mvrelax/pde_solver.hpp"
#include "mvrelax/test_functions.hpp"

namespace mvrelax {

// Run configuration read from a JSON file. Every field has a default (shown
// below); unknown keys are errors.
//
// {
//   "problem": {"T": 0.5, "f": "0", "y0": "x*(1-x)", "ybox": [-1.5, 1.5],
//               "zbox": [8, 8], "lipschitz": null, "r_exponent": 2},
//   "initial_data": "polynomial",      // or "sine": tabulated sin(pi x)
//   "field": "dirac",                  // or "counterexample" (bump field)
//   "grid": "128x127",                 // Nt x Nx
//   "scheme": "crank-nicolson",        // or "implicit-euler"
//   "newton": {"tol": 1e-12, "max_iter": 30},
//   "suite": "all",                    // mv, emv, ibp, occupation, certificate
//   "basis": {"time": 6, "space": 6, "state_degree": 3,
//             "time_kind": "poly-bump", "space_kind": "sine",
//             "occupation_degree": 4},
//   "tolerances": {"residual_constant": 0.0731, "occupation_constant": 73.7,
//                  "certificate": 1e-10},
//   "relax": {"degrees": [2, 3, 4], "objectives": {"y": "y"},
//             "fit_boxes": true, "box_inflation": 0.5, "rescale": true,
//             "second_order_rows": true, "basis": "legendre",
//             "first_moments": false},
//   "solver": {"tol": 1e-6, "max_iters": 20000,
//              "max_iters_by_degree": {"4": 10000}, "rho": 1.0,
//              "relaxation": 1.6, "anderson_memory": 10,
//              "adapt_every": 100, "adapt_ratio": 10},
//   "convergence": {"grids": ["32x31", "64x63", "128x127"],
//                   "expected_order": null},  // [lo, hi]; null picks by scheme
//   "output": "out"
// }
enum class InitialData { polynomial, sine };
enum class FieldKind { dirac, counterexample };
enum class Suite { all, mv, emv, ibp, occupation, certificate };

[[nodiscard]] std::string_view suite_name(Suite s);
// Throws InvalidInput("bad-suite").
[[nodiscard]] Suite parse_suite(std::string_view name);

struct GridSpec {
  int nt = 128;
  int nx = 127;
};

// "NtxNx", e.g. "64x63". Throws InvalidInput("bad-grid").
[[nodiscard]] GridSpec parse_grid(std::string_view text);
[[nodiscard]] std::string grid_text(const GridSpec& g);

// T = 0.5, f = 0, y0 = x*(1-x), ybox [-1.5, 1.5], zbox (8, 8).
[[nodiscard]] ProblemSpec default_problem_spec();

struct RunConfig {
  ProblemSpec problem = default_problem_spec();
  InitialData initial_data = InitialData::polynomial;
  FieldKind field = FieldKind::dirac;
  GridSpec grid;
  SolveOptions solve;
  Suite suite = Suite::all;

  int basis_time = 6;
  int basis_space = 6;
  int basis_state_degree = 3;
  TestFnKind time_kind = TestFnKind::poly_bump;
  TestFnKind space_kind = TestFnKind::sine;
  int occupation_degree = 4;

  double residual_constant = 0.0731;
  double occupation_constant = 73.7;
  double certificate_tol = 1e-10;

  std::vector<int> degrees{2, 3, 4};
  std::vector<std::pair<std::string, std::string>> objectives{{"y", "y"}};
  bool fit_boxes = true;
  double box_inflation = 0.5;
  AssembleOptions assemble;
  bool first_moments = false;

  double solver_tol = 1e-6;
  int solver_max_iters = 20000;
  std::map<int, int> max_iters_by_degree{{4, 10000}};
  double rho = 1.0;
  double relaxation = 1.6;
  int anderson_memory = 10;
  int adapt_every = 100;
  double adapt_ratio = 10.0;

  std::vector<GridSpec> convergence_grids{{32, 31}, {64, 63}, {128, 127}};
  std::optional<Interval> expected_order;

  std::string output = "out";

  [[nodiscard]] SolverOptions solver_options() const;
  // Expected observed order: the configured range, else [1.7, 2.3] for
  // Crank-Nicolson and [0.7, 1.3] for implicit Euler.
  [[nodiscard]] Interval order_range() const;
};

// Throws InvalidInput with codes "config-parse", "unknown-config-key",
// "bad-config-value" and the problem validation codes of make_problem.
[[nodiscard]] RunConfig parse_config(const Json& j);
[[nodiscard]] RunConfig load_config(const std::string& path);

// Canonical form with every default filled in.
[[nodiscard]] Json to_json(const RunConfig& c);
// FNV-1a of the canonical form without the output directory.
[[nodiscard]] std::string config_hash(const RunConfig& c);

}  // namespace mvrelax
