#include "mvrelax/problem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "mvrelax/error.hpp"
#include "mvrelax/hash.hpp"

namespace mvrelax {

namespace {

// Range of y0 over a dense sample of [0,1].
Interval sampled_range(const Polynomial& y0) {
  constexpr int kSamples = 2048;
  Interval r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (int i = 0; i <= kSamples; ++i) {
    const double v = y0.evaluate(0.0, static_cast<double>(i) / kSamples);
    r.lo = std::min(r.lo, v);
    r.hi = std::max(r.hi, v);
  }
  return r;
}

}  // namespace

double estimate_lipschitz(const Polynomial& f, double T, const Interval& ybox) {
  const Polynomial dfdy = f.derivative(Var::y);
  const int n = kLipschitzSamples;
  const std::array<double, 3> lo{0.0, 0.0, ybox.lo};
  const std::array<double, 3> step{T / (n - 1), 1.0 / (n - 1), ybox.width() / (n - 1)};
  const auto eval = [&](const std::array<double, 3>& p) { return dfdy.evaluate(p[0], p[1], p[2]); };

  std::array<double, 3> arg{};
  double best = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        const std::array<double, 3> p{lo[0] + a * step[0], lo[1] + b * step[1], lo[2] + c * step[2]};
        const double v = eval(p);
        if (v > best) {
          best = v;
          arg = p;
        }
      }
    }
  }
  // Polish the best sample by golden-section sweeps over its neighbouring
  // cells, one coordinate at a time. This can only raise the estimate, so it
  // stays at least the sampled maximum while recovering interior maxima that
  // fall between samples.
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int sweep = 0; sweep < 3; ++sweep) {
    for (std::size_t k = 0; k < 3; ++k) {
      const double hi_box = lo[k] + (n - 1) * step[k];
      double l = std::max(lo[k], arg[k] - step[k]);
      double r = std::min(hi_box, arg[k] + step[k]);
      std::array<double, 3> p = arg;
      for (int it = 0; it < 80 && r - l > 1e-15 * (1.0 + std::abs(r)); ++it) {
        const double m1 = r - gr * (r - l);
        const double m2 = l + gr * (r - l);
        p[k] = m1;
        const double v1 = eval(p);
        p[k] = m2;
        const double v2 = eval(p);
        if (v1 < v2) l = m1; else r = m2;
      }
      p[k] = 0.5 * (l + r);
      const double v = eval(p);
      if (v > best) {
        best = v;
        arg = p;
      }
    }
  }
  return std::max(best, 0.0);
}

PdeProblem make_problem(const ProblemSpec& spec) {
  if (!(spec.T > 0.0) || !std::isfinite(spec.T))
    throw InvalidInput("bad-problem", "time horizon T must be positive and finite");
  if (!(spec.ybox.hi > spec.ybox.lo))
    throw InvalidInput("bad-problem", "ybox must have positive width");
  if (!(spec.zbox.z0_max > 0.0) || !(spec.zbox.z1_max > 0.0))
    throw InvalidInput("bad-problem", "zbox half-widths must be positive");
  for (Var v : {Var::z0, Var::z1})
    if (spec.f.depends_on(v))
      throw InvalidInput("bad-problem", "f may only depend on (t, x, y)");
  for (Var v : {Var::t, Var::y, Var::z0, Var::z1})
    if (spec.y0.depends_on(v)) throw InvalidInput("bad-problem", "y0 may only depend on x");

  // y0(0) is the constant coefficient; y0(1) is the coefficient sum. Allow
  // only the rounding of that sum.
  double sum = 0.0;
  double abs_sum = 0.0;
  for (const auto& [e, c] : spec.y0.terms()) {
    sum += c;
    abs_sum += std::abs(c);
  }
  const double y0_at_0 = spec.y0.coefficient(Exponents{});
  if (y0_at_0 != 0.0 || std::abs(sum) > 4.0 * std::numeric_limits<double>::epsilon() * abs_sum)
    throw InvalidInput("ic-boundary-violation",
                       fmt::format("y0 must vanish at x=0 and x=1 (y0(0)={}, y0(1)={})", y0_at_0, sum));

  const Interval range = sampled_range(spec.y0);
  if (!spec.ybox.strictly_contains(range.lo) || !spec.ybox.strictly_contains(range.hi))
    throw InvalidInput("ic-not-in-ybox",
                       fmt::format("ybox [{}, {}] does not strictly contain range(y0) = [{}, {}]",
                                   spec.ybox.lo, spec.ybox.hi, range.lo, range.hi));

  PdeProblem p;
  p.T = spec.T;
  p.f = spec.f;
  p.y0 = spec.y0;
  p.ybox = spec.ybox;
  p.zbox = spec.zbox;
  p.r_exponent = spec.r_exponent;
  const double sampled = estimate_lipschitz(spec.f, spec.T, spec.ybox);
  if (spec.lipschitz) {
    if (*spec.lipschitz < sampled)
      throw InvalidInput("lipschitz-too-small",
                         fmt::format("L_Y = {} is below the sampled max of df/dy = {}",
                                     *spec.lipschitz, sampled));
    p.lipschitz = *spec.lipschitz;
  } else {
    p.lipschitz = sampled;
  }
  return p;
}

std::uint64_t problem_hash(const PdeProblem& p) {
  const std::string canonical = fmt::format(
      "T={:.17g};f={};y0={};ybox=[{:.17g},{:.17g}];zbox=[{:.17g},{:.17g}];L={:.17g};r={}", p.T,
      p.f.to_string(), p.y0.to_string(), p.ybox.lo, p.ybox.hi, p.zbox.z0_max, p.zbox.z1_max,
      p.lipschitz, p.r_exponent);
  return fnv1a64(canonical);
}

}  // namespace mvrelax
