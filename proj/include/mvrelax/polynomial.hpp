#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>

namespace mvrelax {

// Coordinates of the lifted space: time, space, state and the two derivative
// slots (time derivative z0, space derivative z1).
enum class Var : int { t = 0, x = 1, y = 2, z0 = 3, z1 = 4 };

inline constexpr int kNumVars = 5;

using Exponents = std::array<int, kNumVars>;
using Point = std::array<double, kNumVars>;

[[nodiscard]] int total_degree(const Exponents& e);
[[nodiscard]] std::string_view var_name(Var v);

// Graded order: lower total degree first, ties broken lexicographically with
// the earlier variable dominating (t > x > y > z0 > z1).
struct GradedLexLess {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

// Sparse real polynomial in (t, x, y, z0, z1). Terms with zero coefficient are
// never stored, so the zero polynomial has an empty term map.
class Polynomial {
 public:
  using TermMap = std::map<Exponents, double, GradedLexLess>;

  Polynomial() = default;
  Polynomial(double c);  // NOLINT(google-explicit-constructor)

  static Polynomial variable(Var v);
  static Polynomial monomial(const Exponents& e, double coefficient = 1.0);

  // Parses expressions such as "y - y^3", "0.5*t*x^2*(1-x)^2" or "2e-3*z0".
  // Throws InvalidInput("polynomial-parse") on malformed text.
  static Polynomial parse(std::string_view text);

  [[nodiscard]] const TermMap& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] int degree() const;
  [[nodiscard]] int degree_in(Var v) const;
  [[nodiscard]] bool depends_on(Var v) const { return degree_in(v) > 0; }
  [[nodiscard]] double coefficient(const Exponents& e) const;

  [[nodiscard]] double operator()(const Point& p) const;
  [[nodiscard]] double evaluate(double t, double x, double y = 0.0,
                                double z0 = 0.0, double z1 = 0.0) const {
    return (*this)({t, x, y, z0, z1});
  }

  [[nodiscard]] Polynomial derivative(Var v) const;
  // Replaces every occurrence of v by the polynomial p.
  [[nodiscard]] Polynomial substitute(Var v, const Polynomial& p) const;
  [[nodiscard]] Polynomial pin(Var v, double value) const;
  // Exact definite integral in v over [lo, hi]; the result no longer depends
  // on v.
  [[nodiscard]] Polynomial integrate(Var v, double lo, double hi) const;
  [[nodiscard]] Polynomial pow(int k) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial& operator*=(double s);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator-(Polynomial a) { return a *= -1.0; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.terms_ == b.terms_;
  }

  // Canonical text form, parseable by `parse`, coefficients printed with
  // round-trip precision.
  [[nodiscard]] std::string to_string() const;

 private:
  void add_term(const Exponents& e, double c);

  TermMap terms_;
};

}  // namespace mvrelax
