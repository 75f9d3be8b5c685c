#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

// Independent reference quadrature for test oracles: composite
// Gauss-Legendre with nodes computed by Newton iteration on P_n.
namespace oracle {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

inline GaussRule gauss_legendre(int n) {
  GaussRule r;
  for (int k = 1; k <= n; ++k) {
    double x = std::cos(std::numbers::pi * (k - 0.25) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes.push_back(x);
    r.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  }
  return r;
}

// int_a^b int_c^d f(t, x) dx dt with `panels` subintervals per axis.
inline double integrate2d(const std::function<double(double, double)>& f, double a, double b, double c, double d,
                          int panels = 16, int order = 12) {
  const GaussRule g = gauss_legendre(order);
  const double ht = (b - a) / panels;
  const double hx = (d - c) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p)
    for (int q = 0; q < panels; ++q)
      for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const double t = a + ht * (p + 0.5 * (g.nodes[i] + 1.0));
        for (std::size_t j = 0; j < g.nodes.size(); ++j) {
          const double x = c + hx * (q + 0.5 * (g.nodes[j] + 1.0));
          total += 0.25 * ht * hx * g.weights[i] * g.weights[j] * f(t, x);
        }
      }
  return total;
}

inline double integrate1d(const std::function<double(double)>& f, double a, double b, int panels = 16,
                          int order = 12) {
  return integrate2d([&](double t, double) { return f(t); }, a, b, 0.0, 1.0, panels, order);
}

}  // namespace oracle
