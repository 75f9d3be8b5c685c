#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "mvrelax/emv_verifier.hpp"
#include "mvrelax/pde_residuals.hpp"
#include "oracle.hpp"

using namespace mvrelax;

namespace {

const SpaceTimeGrid kGrid(0.5, 64, 63);

const ResidualReport& find(const std::vector<ResidualReport>& rs, ResidualFamily f) {
  for (const auto& r : rs)
    if (r.family == f) return r;
  throw std::runtime_error("family missing");
}

}  // namespace

TEST(ResidualReport, NormsTrackEntries) {
  ResidualReport r(ResidualFamily::m1_weak, {2}, kGrid, 1.0);
  r.add({0}, 3.0);
  r.add({1}, -4.0);
  EXPECT_EQ(r.max, 4.0);
  EXPECT_EQ(r.l2, 5.0);
  EXPECT_FALSE(r.passes());
  r.add({2}, std::nan(""));
  EXPECT_TRUE(std::isnan(r.max));
  EXPECT_FALSE(r.passes());
}

TEST(TestFunctions, VanishAtEndpointsAndDerivativesMatch) {
  const VerifierBases b = default_bases(0.5, 4, 4, 3, TestFnKind::poly_bump, TestFnKind::poly_bump);
  const VerifierBases s = default_bases(0.5, 4, 4, 3, TestFnKind::sine, TestFnKind::sine);
  for (const auto* basis : {&b, &s}) {
    for (const auto& phi : basis->time) {
      EXPECT_NEAR(phi.value(0.0), 0.0, 1e-15);
      EXPECT_NEAR(phi.value(0.5), 0.0, 1e-15);
      const double h = 1e-6;
      EXPECT_NEAR(phi.derivative(0.2), (phi.value(0.2 + h) - phi.value(0.2 - h)) / (2 * h), 1e-6);
    }
    for (const auto& v : basis->space) {
      EXPECT_NEAR(v.value(0.0), 0.0, 1e-15);
      EXPECT_NEAR(v.value(1.0), 0.0, 1e-15);
      const double h = 1e-6;
      EXPECT_NEAR(v.derivative(0.3), (v.value(0.3 + h) - v.value(0.3 - h)) / (2 * h), 1e-6);
    }
  }
  EXPECT_EQ(b.state.size(), 4u);
  EXPECT_DOUBLE_EQ(b.state[3].derivative(2.0), 12.0);
}

TEST(Ibp, ZeroLiftIsExactlyZero) {
  const YoungField f = lift_dirac(solve(fixtures::zero(), kGrid));
  for (const auto& r : ibp_residual_suite(f, default_bases(0.5, 2, 2, 3), 0.0)) {
    // beta = 1 carries only the quadrature error of int psi_t, skip it.
    for (const auto& e : r.entries)
      if (e.index[0] > 0) EXPECT_EQ(e.value, 0.0);
  }
}

TEST(Ibp, HeatLiftIsSecondOrder) {
  const StateTestFn beta(Polynomial::variable(Var::y));
  const auto phi = TimeTestFn::poly_bump(0.5, Polynomial(1.0));
  const auto v = SpaceTestFn::sine(1);
  std::vector<double> rt, rs;
  for (int N : {32, 64, 128}) {
    const YoungField f = lift_dirac(fixtures::heat_solve(SpaceTimeGrid(0.5, N, N - 1)));
    rt.push_back(std::abs(ibp_residual_time(f, beta, phi, v)));
    rs.push_back(std::abs(ibp_residual_space(f, beta, phi, v)));
    EXPECT_LE(rt.back(), tol_residual(f.grid()));
    EXPECT_LE(rs.back(), tol_residual(f.grid()));
  }
  for (std::size_t k = 1; k < rt.size(); ++k) EXPECT_NEAR(rt[k - 1] / rt[k], 4.0, 0.8);
  // Central differences in x make the space identity a discrete summation by
  // parts, so only rounding remains.
  for (double r : rs) EXPECT_LE(r, 1e-15);
}

TEST(Ibp, CounterexampleOddBetaVanishes) {
  const YoungField f = counterexample_field(kGrid, BumpSpec::with_peak(0.5));
  const StateTestFn y(Polynomial::variable(Var::y));
  const StateTestFn y2(Polynomial::parse("y^2"));
  for (const auto& phi : time_basis(0.5, 3))
    for (const auto& v : space_basis(3)) {
      EXPECT_EQ(ibp_residual_time(f, y, phi, v), 0.0);
      EXPECT_EQ(ibp_residual_space(f, y, phi, v), 0.0);
      // beta = y^2 integrates d(psi g^2); only quadrature error remains.
      EXPECT_LE(std::abs(ibp_residual_time(f, y2, phi, v)), tol_residual(kGrid));
      EXPECT_LE(std::abs(ibp_residual_space(f, y2, phi, v)), tol_residual(kGrid));
    }
}

TEST(Suites, DiracLiftCollapsesToPdeResiduals) {
  const PdeProblem p = fixtures::allen_cahn();
  const FieldSolution s = solve(p, kGrid);
  const YoungField f = lift_dirac(s);
  const VerifierBases b = default_bases(0.5, 3, 3);
  const auto mv = mv_residual_suite(f, p, b.time, b.space, 0.0);
  const auto emv = emv_residual_suite(f, p, b.time, b.space, 0.0);
  const auto& m1 = find(mv, ResidualFamily::m1_weak);
  const auto& m2 = find(emv, ResidualFamily::m2_weak);
  const auto& diss = find(emv, ResidualFamily::dissipation);
  for (std::size_t k = 0; k < b.time.size(); ++k) {
    for (std::size_t j = 0; j < b.space.size(); ++j) {
      const std::size_t e = k * b.space.size() + j;
      EXPECT_EQ(m1.entries[e].value, weak_residual(s, p, b.space[j], b.time[k]));
      EXPECT_EQ(m2.entries[e].value, energy_residual_m2(s, p, b.space[j], b.time[k]));
    }
    EXPECT_EQ(diss.entries[k].value, energy_residual_dissipation(s, p, b.time[k]));
  }
  EXPECT_EQ(find(mv, ResidualFamily::m1_ic).max, 0.0);
  EXPECT_EQ(find(mv, ResidualFamily::m1_bc).max, 0.0);
  EXPECT_EQ(find(emv, ResidualFamily::m2_ic).max, 0.0);
  EXPECT_EQ(find(emv, ResidualFamily::m2_bc).max, 0.0);
}

TEST(Suites, ConvergedLiftPassesTolerance) {
  const PdeProblem p = fixtures::allen_cahn();
  const YoungField f = lift_dirac(solve(p, kGrid));
  const VerifierBases b = default_bases(0.5);
  const double tol = tol_residual(kGrid);
  for (const auto& r : mv_residual_suite(f, p, b.time, b.space, tol)) EXPECT_TRUE(r.passes()) << r.name();
  for (const auto& r : emv_residual_suite(f, p, b.time, b.space, tol)) EXPECT_TRUE(r.passes()) << r.name();
  for (const auto& r : ibp_residual_suite(f, b, tol)) EXPECT_TRUE(r.passes()) << r.name();
}

TEST(Suites, ZeroFieldAllExactlyZero) {
  const PdeProblem p = fixtures::cubic_zero();
  const YoungField f = lift_dirac(solve(p, kGrid));
  const VerifierBases b = default_bases(0.5);
  for (const auto& r : mv_residual_suite(f, p, b.time, b.space, 0.0)) EXPECT_EQ(r.max, 0.0) << r.name();
  for (const auto& r : emv_residual_suite(f, p, b.time, b.space, 0.0)) EXPECT_EQ(r.max, 0.0) << r.name();
}

TEST(Suites, PerturbedCellIsDetected) {
  const PdeProblem p = fixtures::make("y - y^3", "0");
  const FieldSolution s = solve(p, kGrid);
  YoungField f = lift_dirac(s);
  const int n = 32, i = 32;
  const Atom a = f.cell(n, i).atoms()[0];
  f.set_cell(n, i, CellMeasure::dirac(a.y + 0.1, a.z0, a.z1));
  const auto phi = time_basis(0.5, 1);
  const auto v = space_basis(1);
  const double before = weak_residual(s, p, v[0], phi[0]);
  const double t = kGrid.t(n), x = kGrid.x(i);
  // Only <f> changes at one node: delta = -w_n w_i phi v (f(y + 0.1) - f(y)).
  const double delta = -kGrid.time_weight(n) * kGrid.space_weight(i) * phi[0].value(t) * v[0].value(x) *
                       (p.f.evaluate(t, x, a.y + 0.1) - p.f.evaluate(t, x, a.y));
  const double bound = std::abs(delta) - std::abs(before);
  EXPECT_EQ(before, 0.0);
  ASSERT_GT(bound, 0.0);
  const auto mv = mv_residual_suite(f, p, phi, v, 0.0);
  EXPECT_GE(find(mv, ResidualFamily::m1_weak).max, bound);
  EXPECT_NEAR(find(mv, ResidualFamily::m1_weak).entries[0].value, before + delta, 1e-15);
}

TEST(Suites, LinearInTimeTestFunction) {
  const PdeProblem p = fixtures::allen_cahn();
  const YoungField f = counterexample_field(kGrid, BumpSpec::with_peak(0.5));
  const auto phi = TimeTestFn::poly_bump(0.5, Polynomial::parse("1 - t"));
  const auto phi3 = TimeTestFn::poly_bump(0.5, Polynomial::parse("-2.5 + 2.5*t"));
  const auto v = space_basis(2);
  const auto a = emv_residual_suite(f, p, {phi}, v, 0.0);
  const auto b = emv_residual_suite(f, p, {phi3}, v, 0.0);
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t e = 0; e < a[r].entries.size(); ++e)
      if (a[r].family == ResidualFamily::m2_weak || a[r].family == ResidualFamily::dissipation)
        EXPECT_NEAR(b[r].entries[e].value, -2.5 * a[r].entries[e].value, 1e-14);
}

TEST(Counterexample, FirstMomentsPassSecondMomentsFail) {
  // The trapezoid error of this integrand is O(h^4); 128 x 127 puts it near
  // 6e-8 relative.
  const SpaceTimeGrid grid(0.5, 128, 127);
  const PdeProblem p = fixtures::cubic_zero();
  const BumpSpec bump = BumpSpec::with_peak(0.5);
  const YoungField f = counterexample_field(grid, bump);
  const VerifierBases b = default_bases(0.5);
  const double tol = tol_residual(grid);
  for (const auto& r : mv_residual_suite(f, p, b.time, b.space, tol)) EXPECT_EQ(r.max, 0.0) << r.name();
  const auto phi = TimeTestFn::poly_bump(0.5, Polynomial(1.0));
  const auto v = SpaceTestFn::sine(1);
  const double entry = find(emv_residual_suite(f, p, {phi}, {v}, tol), ResidualFamily::m2_weak).entries[0].value;
  const double T = 0.5;
  const double ref = oracle::integrate2d(
      [&](double t, double x) {
        const double g = bump.value(t, x), gt = bump.dt(t, x), gx = bump.dx(t, x);
        const double ph = t * t * (T - t) * (T - t);
        const double vv = std::sin(fixtures::kPi * x), dv = fixtures::kPi * std::cos(fixtures::kPi * x);
        return ph * (vv * 2 * g * gt + dv * 2 * g * gx + 2 * vv * gx * gx - 2 * vv * g * g * g * g);
      },
      0.0, T, 0.0, 1.0);
  EXPECT_NEAR(entry, ref, 1e-6 * std::abs(ref));
  EXPECT_GT(std::abs(entry), 10.0 * tol);
}

TEST(Certificate, DiracLiftGivesZero) {
  const PdeProblem p = fixtures::allen_cahn();
  const FieldSolution s = solve(p, kGrid);
  const auto r = dual_heat_certificate(lift_dirac(s), s, p, BumpSpec::with_peak(0.5).polynomial());
  EXPECT_EQ(r.integral, 0.0);
  EXPECT_TRUE(r.emv_consistent);
  EXPECT_TRUE(r.max_principle_ok);
}

TEST(Certificate, ZeroSourceGivesZero) {
  const PdeProblem p = fixtures::cubic_zero();
  const YoungField f = counterexample_field(kGrid, BumpSpec::with_peak(0.5));
  const auto r = dual_heat_certificate(f, solve(p, kGrid), p, Polynomial(0.0));
  EXPECT_EQ(r.integral, 0.0);
  EXPECT_EQ(r.phi_g.abs().maxCoeff(), 0.0);
}

TEST(Certificate, CounterexampleMatchesOracle) {
  const PdeProblem p = fixtures::cubic_zero();
  const BumpSpec bump = BumpSpec::with_peak(0.5);
  const YoungField f = counterexample_field(kGrid, bump);
  const auto r = dual_heat_certificate(f, solve(p, kGrid), p, bump.polynomial());
  const double L = p.lipschitz;
  const double ref = oracle::integrate2d(
      [&](double t, double x) {
        const double g = bump.value(t, x);
        return std::exp(-2 * t * L) * g * g * g;
      },
      0.0, 0.5, 0.0, 1.0);
  EXPECT_NEAR(r.integral, ref, 1e-6 * ref);
  EXPECT_FALSE(r.emv_consistent);
  EXPECT_TRUE(r.max_principle_ok);
  EXPECT_GE(r.min_phi_g, -1e-10);
}

TEST(Certificate, MonotoneInErrorDensity) {
  const PdeProblem p = fixtures::cubic_zero();
  const FieldSolution zero = solve(p, kGrid);
  const Polynomial src = BumpSpec::with_peak(0.5).polynomial();
  const YoungField a = counterexample_field(kGrid, BumpSpec::with_peak(0.5, 0.5));
  const YoungField b = counterexample_field(kGrid, BumpSpec::with_peak(0.5, 0.6));
  EXPECT_LE(dual_heat_certificate(a, zero, p, src).integral, dual_heat_certificate(b, zero, p, src).integral);
}

TEST(Certificate, HeatSolveMatchesSeparatedSource) {
  // Source g = x(1-x) constant in time: phi_g is the heat solution with a
  // steady source, checked against its sine series.
  const PdeProblem p = fixtures::cubic_zero();
  const YoungField f = lift_dirac(solve(p, kGrid));
  const auto r = dual_heat_certificate(f, solve(p, kGrid), p, Polynomial::parse("x*(1-x)"));
  double exact = 0.0;
  const double t = 0.5, x = 0.5;
  for (int k = 1; k < 200; k += 2) {
    const double lam = std::pow(k * fixtures::kPi, 2);
    const double bk = 8.0 / std::pow(k * fixtures::kPi, 3);  // sine coefficients of x(1-x)
    exact += bk * (1 - std::exp(-lam * t)) / lam * std::sin(k * fixtures::kPi * x);
  }
  EXPECT_NEAR(r.phi_g(64, 32), exact, 5.0 * fixtures::h2(kGrid) * 0.1);
}
