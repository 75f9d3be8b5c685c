#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

#include "mvrelax/polynomial.hpp"

namespace mvrelax {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] double width() const { return hi - lo; }
  [[nodiscard]] double center() const { return 0.5 * (lo + hi); }
  [[nodiscard]] bool contains(double v) const { return lo <= v && v <= hi; }
  [[nodiscard]] bool strictly_contains(double v) const { return lo < v && v < hi; }
};

// Symmetric derivative box [-z0_max, z0_max] x [-z1_max, z1_max].
struct DerivativeBox {
  double z0_max = 1.0;
  double z1_max = 1.0;

  [[nodiscard]] bool contains(double z0, double z1) const {
    return std::abs(z0) <= z0_max && std::abs(z1) <= z1_max;
  }
};

// Samples per axis used to estimate the one-sided Lipschitz constant.
inline constexpr int kLipschitzSamples = 64;

// dy/dt - d2y/dx2 = f(t, x, y) on (0,T] x (0,1), y = 0 at x in {0,1},
// y(0, .) = y0. Everything is polynomial so that the relaxation can consume
// the same object.
struct PdeProblem {
  double T = 1.0;
  Polynomial f;
  Polynomial y0;  // in x only
  Interval ybox{-1.0, 1.0};
  DerivativeBox zbox;
  // One-sided Lipschitz constant of f in y over ybox.
  double lipschitz = 0.0;
  // Integrability exponent of the function-space setting. Recorded for
  // provenance only; no numerical routine reads it.
  int r_exponent = 2;
};

struct ProblemSpec {
  double T = 1.0;
  Polynomial f;
  Polynomial y0;
  Interval ybox{-1.0, 1.0};
  DerivativeBox zbox;
  std::optional<double> lipschitz;  // estimated when absent
  int r_exponent = 2;
};

// Max of df/dy over a kLipschitzSamples^3 tensor sample of
// [0,T] x [0,1] x ybox, polished locally around the best sample and clipped
// below at 0.
[[nodiscard]] double estimate_lipschitz(const Polynomial& f, double T, const Interval& ybox);

// Validates a ProblemSpec and fills in derived data. Error codes:
//   "ic-boundary-violation"  y0(0) or y0(1) nonzero
//   "ic-not-in-ybox"         ybox does not strictly contain range(y0)
//   "lipschitz-too-small"    supplied L_Y below the sampled max of df/dy
//   "bad-problem"            other malformed input
[[nodiscard]] PdeProblem make_problem(const ProblemSpec& spec);

// Stable 64-bit FNV-1a digest of the canonical problem text.
[[nodiscard]] std::uint64_t problem_hash(const PdeProblem& p);

}  // namespace mvrelax
