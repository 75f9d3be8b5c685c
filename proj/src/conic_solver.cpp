#include "mvrelax/conic_solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <fmt/format.h>

#include "mvrelax/error.hpp"

namespace mvrelax {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

constexpr double kSqrt2 = std::numbers::sqrt2;

// Stacked svec of all blocks: off-diagonal entries carry sqrt(2) so that the
// Euclidean norm of the stack is the Frobenius norm of the blocks.
struct ConeLayout {
  std::vector<int> dims;
  std::vector<int> offsets;
  int size = 0;
};

ConeLayout cone_layout(const RelaxationProblem& rp) {
  ConeLayout c;
  for (const PsdBlock& b : rp.blocks) {
    c.dims.push_back(b.dim);
    c.offsets.push_back(c.size);
    c.size += b.dim * (b.dim + 1) / 2;
  }
  return c;
}

SpMat svec_operator(const RelaxationProblem& rp, const ConeLayout& cones) {
  std::vector<Triplet> trips;
  for (std::size_t b = 0; b < rp.blocks.size(); ++b) {
    const PsdBlock& block = rp.blocks[b];
    for (int j = 0; j < block.dim; ++j)
      for (int i = 0; i <= j; ++i) {
        const int p = PsdBlock::packed(i, j);
        const double w = i == j ? 1.0 : kSqrt2;
        for (const auto& [k, c] : block.entries[static_cast<std::size_t>(p)])
          trips.emplace_back(cones.offsets[b] + p, k, w * c);
      }
  }
  SpMat m(cones.size, rp.num_moments);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

Eigen::MatrixXd unpack(const Eigen::Ref<const Eigen::VectorXd>& v, int dim) {
  Eigen::MatrixXd m(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i <= j; ++i) {
      const double e = v(PsdBlock::packed(i, j));
      m(i, j) = i == j ? e : e / kSqrt2;
      m(j, i) = m(i, j);
    }
  return m;
}

void pack(const Eigen::MatrixXd& m, Eigen::Ref<Eigen::VectorXd> v) {
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i <= j; ++i) v(PsdBlock::packed(i, j)) = i == j ? m(i, i) : kSqrt2 * m(i, j);
}

// Euclidean projection onto the product of PSD cones.
void project_psd(Eigen::VectorXd& v, const ConeLayout& cones) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  for (std::size_t b = 0; b < cones.dims.size(); ++b) {
    const int dim = cones.dims[b];
    auto seg = v.segment(cones.offsets[b], dim * (dim + 1) / 2);
    es.compute(unpack(seg, dim));
    if (es.info() != Eigen::Success) throw NumericalBreakdown("eigensolver failed in the PSD projection");
    const Eigen::VectorXd& lam = es.eigenvalues();
    if (lam.minCoeff() >= 0.0) continue;
    const Eigen::VectorXd clipped = lam.cwiseMax(0.0);
    pack(es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose(), seg);
  }
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalBreakdown("eigensolver failed on a moment block");
  return es.eigenvalues().minCoeff();
}

// Equality rows with every row divided by its largest coefficient.
struct ScaledRows {
  SpMat a;
  Eigen::VectorXd b;
};

ScaledRows scaled_rows(const RelaxationProblem& rp) {
  std::vector<Triplet> trips;
  std::vector<double> rhs;
  for (const EqualityRow& row : rp.rows) {
    double s = 0.0;
    for (const auto& [k, c] : row.terms) s = std::max(s, std::abs(c));
    if (s == 0.0) {
      // An empty row is either vacuous or contradicts 0 = rhs.
      if (row.rhs == 0.0) continue;
      s = std::abs(row.rhs);
    }
    const int r = static_cast<int>(rhs.size());
    for (const auto& [k, c] : row.terms) trips.emplace_back(r, k, c / s);
    rhs.push_back(row.rhs / s);
  }
  ScaledRows out{SpMat(static_cast<int>(rhs.size()), rp.num_moments),
                 Eigen::Map<const Eigen::VectorXd>(rhs.data(), static_cast<int>(rhs.size()))};
  out.a.setFromTriplets(trips.begin(), trips.end());
  return out;
}

// x = argmin 1/2 |M x - v|^2 + q.x subject to A x = b, solved through a
// Cholesky factor of H = M'M and the pseudo-inverse of S = A H^-1 A'.
class EqualityProjector {
 public:
  EqualityProjector(const SpMat& m, const ScaledRows& rows) : a_(rows.a), b_(rows.b) {
    const SpMat h = (m.transpose() * m).pruned();
    llt_.compute(h);
    if (llt_.info() != Eigen::Success) throw NumericalBreakdown("Cholesky factorization of M'M failed");
    const int p = static_cast<int>(a_.rows());
    if (p == 0) return;
    const Eigen::MatrixXd x = llt_.solve(Eigen::MatrixXd(a_.transpose()));
    if (!x.allFinite()) throw NumericalBreakdown("non-finite solve with the M'M factor");
    const Eigen::MatrixXd s = a_ * x;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    if (es.info() != Eigen::Success) throw NumericalBreakdown("eigensolver failed on the Schur complement");
    const double top = std::max(es.eigenvalues().maxCoeff(), 0.0);
    std::vector<int> keep;
    for (int k = 0; k < p; ++k)
      if (es.eigenvalues()(k) > 1e-11 * top) keep.push_back(k);
    rank_ = static_cast<int>(keep.size());
    Eigen::MatrixXd v(p, rank_);
    Eigen::VectorXd inv(rank_);
    for (int k = 0; k < rank_; ++k) {
      v.col(k) = es.eigenvectors().col(keep[static_cast<std::size_t>(k)]);
      inv(k) = 1.0 / es.eigenvalues()(keep[static_cast<std::size_t>(k)]);
    }
    p_ = x * v;
    q_ = inv.asDiagonal() * v.transpose();
  }

  // r = M'v - q on input.
  [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& r) const {
    Eigen::VectorXd w = llt_.solve(r);
    if (a_.rows() == 0) return w;
    const Eigen::VectorXd lam = q_ * (a_ * w - b_);
    w.noalias() -= p_ * lam;
    return w;
  }

  [[nodiscard]] int rank() const { return rank_; }

 private:
  SpMat a_;
  Eigen::VectorXd b_;
  Eigen::SimplicialLLT<SpMat> llt_;
  Eigen::MatrixXd p_;
  Eigen::MatrixXd q_;
  int rank_ = 0;
};

double inf_norm(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// Exit residuals from the assembled operators.
void finalize(const RelaxationProblem& rp, const SpMat& raw_a, const Eigen::VectorXd& raw_b, const SpMat& m,
              const ConeLayout& cones, ConicSolution& sol) {
  sol.objective = rp.cost.dot(sol.moments);
  sol.equality_residual = raw_a.rows() == 0 ? 0.0 : inf_norm(raw_a * sol.moments - raw_b);
  const Eigen::VectorXd mx = m * sol.moments;
  double worst = 0.0;
  for (std::size_t b = 0; b < cones.dims.size(); ++b) {
    const int dim = cones.dims[b];
    worst = std::max(worst, -min_eigenvalue(unpack(mx.segment(cones.offsets[b], dim * (dim + 1) / 2), dim)));
  }
  sol.psd_residual = std::max(worst, 0.0);
}

}  // namespace

std::string_view conic_status_name(ConicStatus s) {
  switch (s) {
    case ConicStatus::optimal:
      return "optimal";
    case ConicStatus::max_iters:
      return "max-iters";
    case ConicStatus::infeasible_detected:
      return "infeasible-detected";
  }
  return "unknown";
}

Residuals recompute_residuals(const RelaxationProblem& rp, const Eigen::VectorXd& moments) {
  if (moments.size() != rp.num_moments) throw InvalidInput("bad-moments", "moment vector has the wrong length");
  Residuals r;
  for (const EqualityRow& row : rp.rows) {
    double v = -row.rhs;
    for (const auto& [k, c] : row.terms) v += c * moments(k);
    r.equality = std::max(r.equality, std::abs(v));
  }
  for (const PsdBlock& b : rp.blocks) r.psd = std::max(r.psd, -min_eigenvalue(b.evaluate(moments)));
  return r;
}

ConicSolution AdmmSolver::solve(const RelaxationProblem& rp, const SolverOptions& opts) const {
  if (!(opts.tol > 0.0) || opts.max_iters < 1 || !(opts.rho > 0.0) || !(opts.relaxation > 0.0 && opts.relaxation < 2.0) ||
      opts.check_every < 1 || opts.adapt_every < 1 || !(opts.adapt_ratio > 1.0))
    throw InvalidInput("bad-solver-options",
                       "tol, max_iters, rho, check_every, adapt_every must be positive, relaxation in (0,2), "
                       "adapt_ratio above 1");
  const int n = rp.num_moments;
  if (opts.warm_start && opts.warm_start->size() != n)
    throw InvalidInput("bad-solver-options", "warm start has the wrong length");

  const ConeLayout cones = cone_layout(rp);
  const SpMat m = svec_operator(rp, cones);
  const SpMat mt = m.transpose();
  const ScaledRows rows = scaled_rows(rp);

  std::vector<Triplet> trips;
  Eigen::VectorXd raw_b(static_cast<int>(rp.rows.size()));
  for (std::size_t r = 0; r < rp.rows.size(); ++r) {
    for (const auto& [k, c] : rp.rows[r].terms) trips.emplace_back(static_cast<int>(r), k, c);
    raw_b(static_cast<int>(r)) = rp.rows[r].rhs;
  }
  SpMat raw_a(static_cast<int>(rp.rows.size()), n);
  raw_a.setFromTriplets(trips.begin(), trips.end());

  const EqualityProjector proj(m, rows);
  ConicSolution sol;

  // Minimum-norm point of the affine set; a nonzero residual means the
  // equality rows are inconsistent.
  Eigen::VectorXd x = proj.solve(Eigen::VectorXd::Zero(n));
  if (rows.a.rows() > 0 && inf_norm(rows.a * x - rows.b) > 1e-8 * std::max(1.0, inf_norm(rows.b))) {
    sol.moments = x;
    sol.status = ConicStatus::infeasible_detected;
    finalize(rp, raw_a, raw_b, m, cones, sol);
    return sol;
  }
  if (opts.warm_start) x = *opts.warm_start;

  const double cnorm = rp.cost.norm();
  const Eigen::VectorXd c = cnorm > 0.0 ? Eigen::VectorXd(rp.cost / cnorm) : Eigen::VectorXd::Zero(n);
  const double sign = rp.sense == Sense::max ? -1.0 : 1.0;

  double rho = opts.rho;
  const double alpha = opts.relaxation;
  const int cone_size = cones.size;

  // One ADMM sweep from the state z = (s, u); returns the next state and
  // keeps the x-iterate for the residual checks.
  Eigen::VectorXd x_out = x;
  Eigen::VectorXd mx(cone_size);
  auto sweep = [&](const Eigen::VectorXd& z) {
    const auto s_in = z.head(cone_size);
    const auto u_in = z.tail(cone_size);
    const Eigen::VectorXd r = mt * (s_in - u_in) - (sign / rho) * c;
    x_out = proj.solve(r);
    mx.noalias() = m * x_out;
    const Eigen::VectorXd relaxed = alpha * mx + (1.0 - alpha) * s_in;
    Eigen::VectorXd next(2 * cone_size);
    next.head(cone_size) = relaxed + u_in;
    auto s_out = next.head(cone_size);
    Eigen::VectorXd s_tmp = s_out;
    project_psd(s_tmp, cones);
    s_out = s_tmp;
    next.tail(cone_size) = u_in + relaxed - s_tmp;
    return next;
  };

  Eigen::VectorXd z(2 * cone_size);
  z.head(cone_size) = m * x;
  {
    Eigen::VectorXd s0 = z.head(cone_size);
    project_psd(s0, cones);
    z.head(cone_size) = s0;
  }
  z.tail(cone_size).setZero();

  // Type-II Anderson acceleration of the sweep map with a residual
  // safeguard: an extrapolated state is kept only if its fixed-point
  // residual does not exceed that of the plain step it replaced.
  const int memory = opts.anderson_memory;
  std::deque<Eigen::VectorXd> d_f;
  std::deque<Eigen::VectorXd> d_g;
  Eigen::MatrixXd gram;  // d_g[i].d_g[j], updated as the memory shifts
  Eigen::VectorXd f_prev;
  Eigen::VectorXd g_prev;
  Eigen::VectorXd plain_fallback;
  double fallback_norm = std::numeric_limits<double>::infinity();
  bool extrapolated = false;

  Eigen::VectorXd best = x;
  double best_score = std::numeric_limits<double>::infinity();
  double best_rp = best_score;
  double best_rd = best_score;
  int it = 0;
  for (it = 1; it <= opts.max_iters; ++it) {
    Eigen::VectorXd f = sweep(z);
    Eigen::VectorXd g = f - z;
    const double g_norm = g.norm();
    if (!std::isfinite(g_norm)) throw NumericalBreakdown(fmt::format("non-finite ADMM state at iteration {}", it));
    if (extrapolated && g_norm > fallback_norm) {
      // Reject the extrapolation and restart the memory from the plain step.
      d_f.clear();
      d_g.clear();
      gram.resize(0, 0);
      f_prev.resize(0);
      z = plain_fallback;
      extrapolated = false;
      fallback_norm = std::numeric_limits<double>::infinity();
      continue;
    }

    if (it % opts.check_every == 0 || it == opts.max_iters) {
      const auto s_in = z.head(cone_size);
      const auto s_new = f.head(cone_size);
      const auto u_new = f.tail(cone_size);
      const double rp_rel = (mx - s_new).norm() / (1.0 + std::max(mx.norm(), s_new.norm()));
      const double rd_rel = rho * (mt * (s_new - s_in)).norm() / (1.0 + rho * (mt * u_new).norm());
      if (!std::isfinite(rp_rel) || !std::isfinite(rd_rel))
        throw NumericalBreakdown(fmt::format("non-finite splitting residual at iteration {}", it));
      if (opts.monitor) opts.monitor({it, rp.cost.dot(x_out), rp_rel, rd_rel, rho});
      const double score = std::max(rp_rel, rd_rel);
      const bool done = rp_rel <= opts.tol && rd_rel <= opts.tol;
      if (score < best_score || done) {
        best_score = score;
        best_rp = rp_rel;
        best_rd = rd_rel;
        best = x_out;
      }
      if (done) {
        sol.status = ConicStatus::optimal;
        break;
      }
      // Residual balancing; u is the scaled dual, so it scales with 1/rho.
      if (it % opts.adapt_every == 0) {
        const double ratio = std::sqrt(rp_rel / std::max(rd_rel, 1e-300));
        if (ratio > opts.adapt_ratio || ratio < 1.0 / opts.adapt_ratio) {
          const double next = std::clamp(rho * ratio, 1e-6, 1e6);
          f.tail(cone_size) *= rho / next;
          rho = next;
          d_f.clear();
          d_g.clear();
          gram.resize(0, 0);
          f_prev.resize(0);
          z = f;
          extrapolated = false;
          fallback_norm = std::numeric_limits<double>::infinity();
          continue;
        }
      }
    }

    if (memory == 0) {
      z = f;
      continue;
    }
    if (f_prev.size() > 0) {
      d_f.push_back(f - f_prev);
      d_g.push_back(g - g_prev);
      if (static_cast<int>(d_f.size()) > memory) {
        d_f.pop_front();
        d_g.pop_front();
        gram = gram.bottomRightCorner(gram.rows() - 1, gram.cols() - 1).eval();
      }
      const int k = static_cast<int>(d_g.size());
      gram.conservativeResize(k, k);
      for (int i = 0; i < k; ++i)
        gram(i, k - 1) = gram(k - 1, i) = d_g[static_cast<std::size_t>(i)].dot(d_g.back());
    }
    f_prev = f;
    g_prev = g;
    if (d_g.empty()) {
      z = f;
      continue;
    }
    const int k = static_cast<int>(d_g.size());
    Eigen::VectorXd rhs(k);
    for (int i = 0; i < k; ++i) rhs(i) = d_g[static_cast<std::size_t>(i)].dot(g);
    Eigen::MatrixXd reg = gram;
    reg.diagonal().array() += 1e-10 * reg.diagonal().maxCoeff() + 1e-300;
    const Eigen::VectorXd gamma = reg.ldlt().solve(rhs);
    if (!gamma.allFinite()) {
      z = f;
      continue;
    }
    plain_fallback = f;
    fallback_norm = g_norm;
    extrapolated = true;
    z = f;
    for (int i = 0; i < k; ++i) z -= gamma(i) * d_f[static_cast<std::size_t>(i)];
  }
  sol.iterations = std::min(it, opts.max_iters);
  sol.moments = best;
  sol.primal_residual = best_rp;
  sol.dual_residual = best_rd;
  finalize(rp, raw_a, raw_b, m, cones, sol);
  return sol;
}

ConicSolution solve(const RelaxationProblem& rp, const SolverOptions& opts, const ConicSolver* solver) {
  static const AdmmSolver kDefault;
  return (solver != nullptr ? *solver : kDefault).solve(rp, opts);
}

}  // namespace mvrelax
