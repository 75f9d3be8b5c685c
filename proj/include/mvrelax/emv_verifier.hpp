#pragma once

#include <span>
#include <vector>

#include "mvrelax/pde_solver.hpp"
#include "mvrelax/residual_report.hpp"
#include "mvrelax/test_functions.hpp"
#include "mvrelax/young_measure.hpp"

namespace mvrelax {

// tol_residual(grid) = c (dx^2 + dt^2). Both constants were calibrated on
// the Crank-Nicolson heat solve from sin(pi x) data at Nt = 64, Nx = 63,
// T = 0.5, as twice the largest |entry| / (dx^2 + dt^2):
//   kTolResidualConstant   ibp, m1-weak, m2-weak and dissipation families
//                          with the default bases (test functions vanishing
//                          on the parabolic boundary);
//   kTolOccupationConstant occupation identities with monomial test
//                          functions of degree <= 4, which do not vanish and
//                          are O(1) in size.
inline constexpr double kTolResidualConstant = 0.0731;
inline constexpr double kTolOccupationConstant = 73.7;
[[nodiscard]] double tol_residual(const SpaceTimeGrid& grid, double c = kTolResidualConstant);
[[nodiscard]] inline double tol_occupation(const SpaceTimeGrid& grid) {
  return tol_residual(grid, kTolOccupationConstant);
}

struct VerifierBases {
  std::vector<TimeTestFn> time;
  std::vector<SpaceTestFn> space;
  std::vector<StateTestFn> state;
};

// 6 time poly-bumps, 6 space sines, beta in {1, y, y^2, y^3}.
[[nodiscard]] VerifierBases default_bases(double T, int n_time = 6, int n_space = 6, int max_state_degree = 3,
                                          TestFnKind time_kind = TestFnKind::poly_bump,
                                          TestFnKind space_kind = TestFnKind::sine);

// psi = phi(t) v(x):  d_t psi <beta> + psi <z0 beta'>.
[[nodiscard]] double ibp_residual_time(const YoungField& field, const StateTestFn& beta, const TimeTestFn& phi,
                                       const SpaceTestFn& v);
// psi = phi(t) v(x):  d_x psi <beta> + psi <z1 beta'>.
[[nodiscard]] double ibp_residual_space(const YoungField& field, const StateTestFn& beta, const TimeTestFn& phi,
                                        const SpaceTestFn& v);

// ibp-time and ibp-space reports, entries indexed (beta, phi, v).
[[nodiscard]] std::vector<ResidualReport> ibp_residual_suite(const YoungField& field, const VerifierBases& bases,
                                                             double tolerance);

// First-moment family: m1-weak entries indexed (phi, v) of
//   phi (v <z0> + v' <z1> - v <f>),
// then m1-ic = max |m1(0,.) - y0| and m1-bc = max |m1| on x in {0,1}.
// `initial` (Nx+2 samples) replaces problem.y0 for tabulated data.
[[nodiscard]] std::vector<ResidualReport> mv_residual_suite(const YoungField& field, const PdeProblem& problem,
                                                            const std::vector<TimeTestFn>& time_basis,
                                                            const std::vector<SpaceTestFn>& space_basis,
                                                            double tolerance, std::span<const double> initial = {});

// Second-moment family: m2-weak entries (phi, v) of
//   phi (v <2 y z0> + v' <2 y z1> - v mfhat),
// m2-ic = max |m2(0,.) - y0^2|, m2-bc = max |m2| on x in {0,1}, and the
// dissipation entries (phi) of phi <z0^2> - phi'/2 <z1^2> - phi <z0 f>.
[[nodiscard]] std::vector<ResidualReport> emv_residual_suite(const YoungField& field, const PdeProblem& problem,
                                                             const std::vector<TimeTestFn>& time_basis,
                                                             const std::vector<SpaceTestFn>& space_basis,
                                                             double tolerance, std::span<const double> initial = {});

struct CertificateOptions {
  Scheme scheme = Scheme::crank_nicolson;
  double certificate_tol = 1e-10;     // integral above this flags a non-emv field
  double max_principle_tol = 1e-10;  // allowed undershoot of phi_g below 0
};

struct CertificateResult {
  double integral = 0.0;  // int int w_hat g dx dt
  GridArray phi_g;        // heat solution with source g(T-t, x)
  double min_phi_g = 0.0;
  bool max_principle_ok = true;
  bool emv_consistent = true;  // integral <= certificate_tol
};

// Solves phi_t - phi_xx = g(T-t, x), phi = 0 on the parabolic boundary, and
// integrates w_hat g with w_hat = exp(-2 t L_Y) <(y - y_ref)^2>.
// g_source must be a polynomial in (t, x).
[[nodiscard]] CertificateResult dual_heat_certificate(const YoungField& field, const FieldSolution& ref,
                                                      const PdeProblem& problem, const Polynomial& g_source,
                                                      const CertificateOptions& opts = {});

}  // namespace mvrelax
