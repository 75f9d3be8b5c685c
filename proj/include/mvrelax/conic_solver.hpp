#pragma once

#include <functional>
#include <optional>
#include <string_view>

#include <Eigen/Core>

#include "mvrelax/moment_relax.hpp"

namespace mvrelax {

enum class ConicStatus { optimal, max_iters, infeasible_detected };

[[nodiscard]] std::string_view conic_status_name(ConicStatus s);

// Snapshot passed to SolverOptions::monitor at every residual check.
struct IterationInfo {
  int iteration = 0;
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double rho = 0.0;
};

struct SolverOptions {
  double tol = 1e-6;
  int max_iters = 20000;
  double rho = 1.0;
  double relaxation = 1.6;
  int check_every = 10;
  // Residual balancing: every adapt_every iterations rho is rescaled when
  // sqrt(primal / dual) leaves [1 / adapt_ratio, adapt_ratio].
  int adapt_every = 100;
  double adapt_ratio = 10.0;
  int anderson_memory = 10;  // 0 disables acceleration
  std::optional<Eigen::VectorXd> warm_start;  // moments
  std::function<void(const IterationInfo&)> monitor;
};

struct ConicSolution {
  Eigen::VectorXd moments;
  double objective = 0.0;
  double equality_residual = 0.0;  // max_k |a_k.x - b_k|
  double psd_residual = 0.0;       // max over blocks of the most negative eigenvalue, clipped at 0
  double primal_residual = 0.0;    // splitting residual, relative
  double dual_residual = 0.0;      // splitting residual, relative
  ConicStatus status = ConicStatus::max_iters;
  int iterations = 0;
};

struct Residuals {
  double equality = 0.0;
  double psd = 0.0;
};

// Equality and PSD residuals evaluated row by row and block by block from
// the problem data.
[[nodiscard]] Residuals recompute_residuals(const RelaxationProblem& rp, const Eigen::VectorXd& moments);

class ConicSolver {
 public:
  virtual ~ConicSolver() = default;
  [[nodiscard]] virtual std::string_view name() const = 0;
  [[nodiscard]] virtual ConicSolution solve(const RelaxationProblem& rp, const SolverOptions& opts) const = 0;
};

// ADMM on  min c.x  s.t.  Ax = b,  M(x) = s,  s in the PSD cones.
// The x-step is an equality-constrained least-squares problem whose KKT
// system is factored once: a sparse Cholesky of M'M and an eigen-
// decomposition of the Schur complement, whose pseudo-inverse absorbs
// redundant rows. Inconsistent equalities are reported as
// infeasible-detected before iterating. Throws NumericalBreakdown.
class AdmmSolver final : public ConicSolver {
 public:
  [[nodiscard]] std::string_view name() const override { return "admm"; }
  [[nodiscard]] ConicSolution solve(const RelaxationProblem& rp, const SolverOptions& opts) const override;
};

// Uses AdmmSolver when `solver` is null.
[[nodiscard]] ConicSolution solve(const RelaxationProblem& rp, const SolverOptions& opts = {},
                                  const ConicSolver* solver = nullptr);

}  // namespace mvrelax
