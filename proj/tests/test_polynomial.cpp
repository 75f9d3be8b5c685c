#include <gtest/gtest.h>

#include "mvrelax/error.hpp"
#include "mvrelax/polynomial.hpp"

using mvrelax::Exponents;
using mvrelax::Polynomial;
using mvrelax::Var;

namespace {

const Polynomial t = Polynomial::variable(Var::t);
const Polynomial x = Polynomial::variable(Var::x);
const Polynomial y = Polynomial::variable(Var::y);

}  // namespace

TEST(Polynomial, ParseMatchesConstruction) {
  const Polynomial p = Polynomial::parse("y - y^3 + 2*x*(1-x)*t");
  EXPECT_EQ(p, y - y.pow(3) + 2.0 * x * (Polynomial(1.0) - x) * t);
  EXPECT_EQ(p.degree(), 3);
  EXPECT_EQ(p.degree_in(Var::y), 3);
  EXPECT_FALSE(p.depends_on(Var::z0));
}

TEST(Polynomial, ToStringRoundTrips) {
  const Polynomial cases[] = {
      Polynomial(0.0), Polynomial(-2.5), x * (Polynomial(1.0) - x),
      0.1 * t.pow(3) * y - 3.0 * Polynomial::variable(Var::z1).pow(2) + 1e-17 * x,
      Polynomial::parse("(t+x+y)^4"),
  };
  for (const Polynomial& p : cases) EXPECT_EQ(Polynomial::parse(p.to_string()), p) << p.to_string();
}

TEST(Polynomial, ParseErrors) {
  for (const char* bad : {"", "x +", "2**x", "q", "(x", "x^-1", "x^y"}) {
    EXPECT_THROW((void)Polynomial::parse(bad), mvrelax::InvalidInput) << bad;
  }
}

TEST(Polynomial, ArithmeticAndEvaluation) {
  const Polynomial p = (x + y) * (x - y);
  EXPECT_EQ(p, x.pow(2) - y.pow(2));
  EXPECT_DOUBLE_EQ(p.evaluate(0.0, 0.3, 0.2), 0.09 - 0.04);
  EXPECT_TRUE((p - p).is_zero());
}

TEST(Polynomial, DerivativeIntegrateAndPin) {
  const Polynomial p = t.pow(2) * x + 3.0 * y.pow(3);
  EXPECT_EQ(p.derivative(Var::t), 2.0 * t * x);
  EXPECT_EQ(p.derivative(Var::y), 9.0 * y.pow(2));
  EXPECT_EQ(p.pin(Var::t, 2.0), 4.0 * x + 3.0 * y.pow(3));
  // int_0^1 x^2 (1-x)^2 dx = 1/30
  const Polynomial bump = x.pow(2) * (Polynomial(1.0) - x).pow(2);
  EXPECT_NEAR(bump.integrate(Var::x, 0.0, 1.0).evaluate(0, 0), 1.0 / 30.0, 1e-16);
  EXPECT_EQ(y.substitute(Var::y, x * x), x * x);
}

TEST(Polynomial, ProductRuleProperty) {
  const Polynomial a = Polynomial::parse("1 + 2*t*x - y^2 + x^3");
  const Polynomial b = Polynomial::parse("t - 3*y*x + 0.5*z0*z1");
  for (Var v : {Var::t, Var::x, Var::y, Var::z0, Var::z1}) {
    const Polynomial lhs = (a * b).derivative(v);
    const Polynomial rhs = a.derivative(v) * b + a * b.derivative(v);
    for (double s : {-0.7, 0.1, 0.9}) {
      const mvrelax::Point pt{s, 1.0 - s, 0.5 * s, s * s, -s};
      EXPECT_NEAR(lhs(pt), rhs(pt), 1e-13);
    }
  }
}
