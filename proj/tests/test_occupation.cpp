#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "mvrelax/emv_verifier.hpp"
#include "mvrelax/error.hpp"
#include "mvrelax/occupation.hpp"
#include "mvrelax/pde_residuals.hpp"
#include "oracle.hpp"

using namespace mvrelax;

namespace {

const SpaceTimeGrid kGrid(0.5, 64, 63);

PdeProblem compatible_heat() { return fixtures::make("0", "x - 2*x^3 + x^4"); }
PdeProblem compatible_allen_cahn() { return fixtures::make("y - y^3", "x - 2*x^3 + x^4"); }

OccupationLift lift_of(const FieldSolution& s) { return lift_occupation(lift_dirac(s), s); }

}  // namespace

TEST(Boundary, NormalsAndMeasures) {
  using B = BoundaryDecomposition;
  EXPECT_EQ(B::eta_t(BoundaryPart::initial), -1.0);
  EXPECT_EQ(B::eta_t(BoundaryPart::terminal), 1.0);
  EXPECT_EQ(B::eta_x(BoundaryPart::left), -1.0);
  EXPECT_EQ(B::eta_x(BoundaryPart::right), 1.0);
  for (BoundaryPart p : kBoundaryParts) EXPECT_EQ(std::hypot(B::eta_t(p), B::eta_x(p)), 1.0);
  EXPECT_EQ(B::measure(BoundaryPart::left, 0.5) + B::measure(BoundaryPart::right, 0.5), 1.0);
}

TEST(Lift, TracesOfSolve) {
  const PdeProblem p = fixtures::allen_cahn();
  const FieldSolution s = solve(p, kGrid);
  const OccupationLift L = lift_of(s);
  const auto& ini = L.trace(BoundaryPart::initial);
  for (std::size_t k = 0; k < ini.cells.size(); ++k)
    EXPECT_EQ(ini.cells[k].atoms()[0].y, p.y0.evaluate(0.0, ini.x[k]));
  for (BoundaryPart side : {BoundaryPart::left, BoundaryPart::right})
    for (const auto& c : L.trace(side).cells) {
      EXPECT_EQ(c.atoms()[0].y, 0.0);
      EXPECT_EQ(c.atoms()[0].z0, 0.0);
    }
  EXPECT_THROW((void)lift_occupation(lift_dirac(solve(p, SpaceTimeGrid(0.5, 8, 7))), s), GridMismatch);
}

TEST(Lift, HeatLateralTraceMatchesClosedForm) {
  for (int N : {32, 64}) {
    const SpaceTimeGrid g(0.5, N, N - 1);
    const OccupationLift L = lift_of(tabulate_field(g, fixtures::heat_exact));
    double err = 0.0;
    for (BoundaryPart side : {BoundaryPart::left, BoundaryPart::right}) {
      const auto& tr = L.trace(side);
      const double sign = side == BoundaryPart::left ? 1.0 : -1.0;
      for (std::size_t k = 0; k < tr.cells.size(); ++k)
        err = std::max(err, std::abs(tr.cells[k].atoms()[0].z1 -
                                     sign * fixtures::kPi * std::exp(-fixtures::kPi * fixtures::kPi * tr.t[k])));
    }
    EXPECT_LE(err, 12.0 * g.dx() * g.dx());
  }
}

TEST(Masses, MatchSurfaceMeasure) {
  const OccupationLift L = lift_of(solve(fixtures::allen_cahn(), kGrid));
  const OccupationMasses m = occupation_masses(L);
  EXPECT_NEAR(m.interior, 0.5, 1e-12);
  EXPECT_NEAR(m.initial, 1.0, 1e-12);
  EXPECT_NEAR(m.terminal, 1.0, 1e-12);
  EXPECT_NEAR(m.lateral, 1.0, 1e-12);
}

TEST(Ibp, ConstantAndLinearInTime) {
  const OccupationLift L = lift_of(solve(fixtures::allen_cahn(), kGrid));
  EXPECT_EQ(occupation_ibp_residual(L, Polynomial(1.0), IbpDirection::time), 0.0);
  EXPECT_EQ(occupation_ibp_residual(L, Polynomial(1.0), IbpDirection::space), 0.0);
  EXPECT_LE(std::abs(occupation_ibp_residual(L, Polynomial::variable(Var::t), IbpDirection::time)), 1e-10);
  EXPECT_LE(std::abs(occupation_ibp_residual(L, Polynomial::variable(Var::x), IbpDirection::space)), 1e-10);
}

TEST(Ibp, HeatXYIsSecondOrder) {
  const Polynomial phi = Polynomial::parse("x*y");
  std::vector<double> r;
  for (int N : {32, 64, 128}) {
    const SpaceTimeGrid g(0.5, N, N - 1);
    const OccupationLift L = lift_of(tabulate_field(g, fixtures::heat_exact));
    r.push_back(std::abs(occupation_ibp_residual(L, phi, IbpDirection::time)));
    EXPECT_LE(r.back(), tol_occupation(g));
  }
  EXPECT_NEAR(r[0] / r[1], 4.0, 0.8);
  EXPECT_NEAR(r[1] / r[2], 4.0, 0.8);
}

TEST(Weak, ZeroSolutionIsExact) {
  const PdeProblem p = fixtures::cubic_zero();
  const OccupationLift L = lift_of(solve(p, kGrid));
  for (const char* phi : {"1", "x*(1-x)*y", "t^2*y^2 + x"}) EXPECT_EQ(occupation_weak_residual(L, p, Polynomial::parse(phi)), 0.0);
}

TEST(Weak, HeatPolynomialTestIsSecondOrder) {
  const PdeProblem p = compatible_heat();
  const Polynomial phi = Polynomial::parse("x*(1-x)");
  std::vector<double> r;
  for (int N : {32, 64, 128}) r.push_back(std::abs(occupation_weak_residual(lift_of(solve(p, SpaceTimeGrid(0.5, N, N - 1))), p, phi)));
  EXPECT_NEAR(r[0] / r[1], 4.0, 0.8);
  EXPECT_NEAR(r[1] / r[2], 4.0, 0.8);
}

TEST(Weak, CounterexampleInteriorGivesOracleValue) {
  const SpaceTimeGrid grid(0.5, 128, 127);
  const PdeProblem p = fixtures::cubic_zero();
  const FieldSolution zero = solve(p, grid);
  const BumpSpec bump = BumpSpec::with_peak(0.5);
  const OccupationLift L = lift_occupation(counterexample_field(grid, bump), zero);
  const double value = occupation_weak_residual(L, p, Polynomial::parse("x*(1-x)*y"));
  // Averaging the +-g atoms of phi (z0 - y^3) + (phi_x + z1 phi_y) z1.
  const double ref = oracle::integrate2d(
      [&](double t, double x) {
        const double g = bump.value(t, x), gt = bump.dt(t, x), gx = bump.dx(t, x);
        return x * (1 - x) * (g * gt - g * g * g * g) + (1 - 2 * x) * g * gx + x * (1 - x) * gx * gx;
      },
      0.0, 0.5, 0.0, 1.0);
  EXPECT_GT(std::abs(ref), 1e-3);
  EXPECT_NEAR(value, ref, 1e-6 * std::abs(ref));
}

TEST(Dissipation, ZeroSolutionIsExact) {
  const PdeProblem p = fixtures::cubic_zero();
  const OccupationLift L = lift_of(solve(p, kGrid));
  EXPECT_EQ(occupation_dissipation_residual(L, p, TimeTestFn::polynomial(0.5, Polynomial(1.0))), 0.0);
}

TEST(Dissipation, HeatConstantPhiIsSecondOrder) {
  const PdeProblem p = compatible_heat();
  const auto one = TimeTestFn::polynomial(0.5, Polynomial(1.0));
  std::vector<double> r;
  for (int N : {32, 64, 128}) {
    const SpaceTimeGrid g(0.5, N, N - 1);
    r.push_back(std::abs(occupation_dissipation_residual(lift_of(solve(p, g)), p, one)));
    EXPECT_LE(r.back(), tol_occupation(g));
  }
  EXPECT_NEAR(r[0] / r[1], 4.0, 0.8);
  EXPECT_NEAR(r[1] / r[2], 4.0, 0.8);
}

TEST(Dissipation, AgreesWithEmvForVanishingPhi) {
  const PdeProblem p = fixtures::allen_cahn();
  const FieldSolution s = solve(p, kGrid);
  const OccupationLift L = lift_of(s);
  const auto phis = time_basis(0.5, 6);
  const auto emv = emv_residual_suite(L.interior, p, phis, space_basis(1), 0.0);
  for (const auto& r : emv) {
    if (r.family != ResidualFamily::dissipation) continue;
    for (std::size_t k = 0; k < phis.size(); ++k)
      EXPECT_NEAR(occupation_dissipation_residual(L, p, phis[k]), r.entries[k].value, 1e-12);
  }
}

TEST(CrossModule, WeakIdentityMatchesPdeResidual) {
  // phi = t^2 (T-t)^2 x (1-x) vanishes on the whole parabolic boundary, so the
  // occupation weak identity is the classical weak residual with v = x(1-x).
  const PdeProblem p = fixtures::allen_cahn();
  const FieldSolution s = solve(p, kGrid);
  const Polynomial q(1.0);
  const Polynomial psi = Polynomial::parse("t^2*(0.5-t)^2*x*(1-x)");
  const double occ = occupation_weak_residual(lift_of(s), p, psi);
  const double pde = weak_residual(s, p, SpaceTestFn::poly_bump(q), TimeTestFn::poly_bump(0.5, q));
  EXPECT_NEAR(occ, pde, 1e-10);
}

TEST(Corners, ReassignmentIsInvariant) {
  const PdeProblem p = compatible_allen_cahn();
  const OccupationLift L = lift_of(solve(p, kGrid));
  const OccupationLift R = reassign_corners(L);
  for (const char* s : {"1", "t*y", "x^2*y^2", "t^2*x*y^3 + y"}) {
    const Polynomial phi = Polynomial::parse(s);
    for (IbpDirection d : {IbpDirection::time, IbpDirection::space})
      EXPECT_NEAR(occupation_ibp_residual(L, phi, d), occupation_ibp_residual(R, phi, d), 1e-12);
    EXPECT_NEAR(occupation_weak_residual(L, p, phi), occupation_weak_residual(R, p, phi), 1e-12);
  }
  const auto phi = TimeTestFn::polynomial(0.5, Polynomial::parse("1 + t"));
  EXPECT_NEAR(occupation_dissipation_residual(L, p, phi), occupation_dissipation_residual(R, p, phi), 1e-12);
  const auto a = marginal_residuals(L, p, 4, 0.0);
  const auto b = marginal_residuals(R, p, 4, 0.0);
  for (std::size_t r = 0; r < a.size(); ++r) EXPECT_NEAR(a[r].max, b[r].max, 1e-12);
}

TEST(Marginals, DiracLiftIsExact) {
  const PdeProblem p = fixtures::allen_cahn();
  const OccupationLift L = lift_of(solve(p, kGrid));
  for (const auto& r : marginal_residuals(L, p, 4, 0.0)) {
    EXPECT_EQ(r.max, 0.0) << r.name();
    EXPECT_FALSE(r.entries.empty());
  }
}

TEST(Marginals, WrongInitialTraceIsDetected) {
  const PdeProblem p = fixtures::allen_cahn();
  const OccupationLift L = lift_of(solve(p, kGrid));
  const PdeProblem other = fixtures::make("y - y^3", "0.5*x*(1-x)");
  for (const auto& r : marginal_residuals(L, other, 2, 0.0))
    if (r.family == ResidualFamily::occupation_ic) EXPECT_GT(r.max, 1e-3);
}

TEST(Suite, CompatibleFixturesPassAndDecay) {
  for (const PdeProblem& p : {compatible_heat(), compatible_allen_cahn()}) {
    std::vector<double> prev;
    for (int N : {32, 64}) {
      const SpaceTimeGrid g(0.5, N, N - 1);
      const auto reports = occupation_identity_suite(lift_of(solve(p, g)), p, 4, tol_occupation(g));
      std::vector<double> cur;
      for (const auto& r : reports) {
        EXPECT_TRUE(r.passes()) << r.name();
        cur.push_back(r.max);
      }
      if (!prev.empty())
        for (std::size_t k = 0; k < cur.size(); ++k) {
          EXPECT_GE(prev[k] / cur[k], 3.2) << reports[k].name();
          EXPECT_LE(prev[k] / cur[k], 4.8) << reports[k].name();
        }
      prev = cur;
    }
  }
}
