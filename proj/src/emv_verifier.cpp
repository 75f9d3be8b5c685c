#include "mvrelax/emv_verifier.hpp"

#include <algorithm>
#include <cmath>

#include "detail/integrands.hpp"
#include "mvrelax/error.hpp"

namespace mvrelax {

namespace {

struct Sampled {
  std::vector<double> value;
  std::vector<double> derivative;
};

Sampled sample_time(const TimeTestFn& phi, const SpaceTimeGrid& g) {
  Sampled s;
  for (int n = 0; n < g.time_points(); ++n) {
    s.value.push_back(phi.value(g.t(n)));
    s.derivative.push_back(phi.derivative(g.t(n)));
  }
  return s;
}

Sampled sample_space(const SpaceTestFn& v, const SpaceTimeGrid& g) {
  Sampled s;
  for (int i = 0; i < g.space_points(); ++i) {
    s.value.push_back(v.value(g.x(i)));
    s.derivative.push_back(v.derivative(g.x(i)));
  }
  return s;
}

// Expectation of one of the shared integrand pieces.
template <typename Piece>
GridArray expect_piece(const YoungField& field, const PdeProblem& problem, Piece&& piece) {
  return field.expect([&](double t, double x, const Atom& a) {
    return piece(detail::AtomValues{a.y, a.z0, a.z1, problem.f.evaluate(t, x, a.y)});
  });
}

double weak_form(const SpaceTimeGrid& g, const Sampled& phi, const Sampled& v, const GridArray& dt,
                 const GridArray& dx, const GridArray& src) {
  GridArray values = g.zeros();
  for (int n = 0; n < g.time_points(); ++n)
    for (int i = 0; i < g.space_points(); ++i)
      values(n, i) = detail::combine_weak(phi.value[static_cast<std::size_t>(n)], v.value[static_cast<std::size_t>(i)],
                                          v.derivative[static_cast<std::size_t>(i)], dt(n, i), dx(n, i), src(n, i));
  return g.integrate(values);
}

double ibp_form(const SpaceTimeGrid& g, const Sampled& phi, const Sampled& v, bool time, const GridArray& beta,
                const GridArray& z_dbeta) {
  GridArray values = g.zeros();
  for (int n = 0; n < g.time_points(); ++n)
    for (int i = 0; i < g.space_points(); ++i) {
      const auto nn = static_cast<std::size_t>(n);
      const auto ii = static_cast<std::size_t>(i);
      const double psi = phi.value[nn] * v.value[ii];
      const double dpsi = time ? phi.derivative[nn] * v.value[ii] : phi.value[nn] * v.derivative[ii];
      values(n, i) = dpsi * beta(n, i) + psi * z_dbeta(n, i);
    }
  return g.integrate(values);
}

struct IbpMoments {
  GridArray beta;
  GridArray z0_dbeta;
  GridArray z1_dbeta;
};

IbpMoments ibp_moments(const YoungField& field, const StateTestFn& beta) {
  return {field.expect([&](double, double, const Atom& a) { return beta.value(a.y); }),
          field.expect([&](double, double, const Atom& a) { return a.z0 * beta.derivative(a.y); }),
          field.expect([&](double, double, const Atom& a) { return a.z1 * beta.derivative(a.y); })};
}

double max_abs_boundary_columns(const GridArray& a) {
  return std::max(a.col(0).abs().maxCoeff(), a.col(a.cols() - 1).abs().maxCoeff());
}

}  // namespace

double tol_residual(const SpaceTimeGrid& grid, double c) {
  return c * (grid.dx() * grid.dx() + grid.dt() * grid.dt());
}

VerifierBases default_bases(double T, int n_time, int n_space, int max_state_degree, TestFnKind time_kind,
                            TestFnKind space_kind) {
  if (n_time < 1 || n_space < 1 || max_state_degree < 0)
    throw InvalidInput("bad-basis", "basis sizes must be positive");
  return {time_basis(T, n_time, time_kind), space_basis(n_space, space_kind), state_basis(max_state_degree)};
}

double ibp_residual_time(const YoungField& field, const StateTestFn& beta, const TimeTestFn& phi,
                         const SpaceTestFn& v) {
  const SpaceTimeGrid& g = field.grid();
  const IbpMoments m = ibp_moments(field, beta);
  return ibp_form(g, sample_time(phi, g), sample_space(v, g), true, m.beta, m.z0_dbeta);
}

double ibp_residual_space(const YoungField& field, const StateTestFn& beta, const TimeTestFn& phi,
                          const SpaceTestFn& v) {
  const SpaceTimeGrid& g = field.grid();
  const IbpMoments m = ibp_moments(field, beta);
  return ibp_form(g, sample_time(phi, g), sample_space(v, g), false, m.beta, m.z1_dbeta);
}

std::vector<ResidualReport> ibp_residual_suite(const YoungField& field, const VerifierBases& bases,
                                               double tolerance) {
  const SpaceTimeGrid& g = field.grid();
  const std::vector<int> dims{static_cast<int>(bases.state.size()), static_cast<int>(bases.time.size()),
                              static_cast<int>(bases.space.size())};
  ResidualReport rt(ResidualFamily::ibp_time, dims, g, tolerance);
  ResidualReport rs(ResidualFamily::ibp_space, dims, g, tolerance);
  std::vector<Sampled> phis, vs;
  for (const auto& phi : bases.time) phis.push_back(sample_time(phi, g));
  for (const auto& v : bases.space) vs.push_back(sample_space(v, g));
  for (std::size_t b = 0; b < bases.state.size(); ++b) {
    const IbpMoments m = ibp_moments(field, bases.state[b]);
    for (std::size_t k = 0; k < phis.size(); ++k)
      for (std::size_t j = 0; j < vs.size(); ++j) {
        const std::vector<int> idx{static_cast<int>(b), static_cast<int>(k), static_cast<int>(j)};
        rt.add(idx, ibp_form(g, phis[k], vs[j], true, m.beta, m.z0_dbeta));
        rs.add(idx, ibp_form(g, phis[k], vs[j], false, m.beta, m.z1_dbeta));
      }
  }
  return {std::move(rt), std::move(rs)};
}

namespace {

double initial_value(const PdeProblem& problem, const SpaceTimeGrid& g, std::span<const double> initial, int i) {
  if (initial.empty()) return problem.y0.evaluate(0.0, g.x(i));
  if (static_cast<int>(initial.size()) != g.space_points())
    throw InvalidInput("bad-initial-data", "initial samples must have Nx+2 entries");
  return initial[static_cast<std::size_t>(i)];
}

}  // namespace

std::vector<ResidualReport> mv_residual_suite(const YoungField& field, const PdeProblem& problem,
                                              const std::vector<TimeTestFn>& time_basis,
                                              const std::vector<SpaceTestFn>& space_basis, double tolerance,
                                              std::span<const double> initial) {
  if (time_basis.empty() || space_basis.empty()) throw InvalidInput("bad-basis", "bases must be nonempty");
  const SpaceTimeGrid& g = field.grid();
  const GridArray dt = expect_piece(field, problem, detail::weak_dt);
  const GridArray dx = expect_piece(field, problem, detail::weak_dx);
  const GridArray src = expect_piece(field, problem, detail::weak_src);
  const GridArray m1 = field.expect([](double, double, const Atom& a) { return a.y; });

  ResidualReport weak(ResidualFamily::m1_weak, {static_cast<int>(time_basis.size()), static_cast<int>(space_basis.size())},
                      g, tolerance);
  for (std::size_t k = 0; k < time_basis.size(); ++k) {
    const Sampled phi = sample_time(time_basis[k], g);
    for (std::size_t j = 0; j < space_basis.size(); ++j)
      weak.add({static_cast<int>(k), static_cast<int>(j)}, weak_form(g, phi, sample_space(space_basis[j], g), dt, dx, src));
  }

  ResidualReport ic(ResidualFamily::m1_ic, {}, g, tolerance);
  double ic_err = 0.0;
  for (int i = 0; i < g.space_points(); ++i)
    ic_err = std::max(ic_err, std::abs(m1(0, i) - initial_value(problem, g, initial, i)));
  ic.add({}, ic_err);

  ResidualReport bc(ResidualFamily::m1_bc, {}, g, tolerance);
  bc.add({}, max_abs_boundary_columns(m1));
  return {std::move(weak), std::move(ic), std::move(bc)};
}

std::vector<ResidualReport> emv_residual_suite(const YoungField& field, const PdeProblem& problem,
                                               const std::vector<TimeTestFn>& time_basis,
                                               const std::vector<SpaceTestFn>& space_basis, double tolerance,
                                               std::span<const double> initial) {
  if (time_basis.empty() || space_basis.empty()) throw InvalidInput("bad-basis", "bases must be nonempty");
  const SpaceTimeGrid& g = field.grid();
  const GridArray dt = expect_piece(field, problem, detail::m2_dt);
  const GridArray dx = expect_piece(field, problem, detail::m2_dx);
  const GridArray src = expect_piece(field, problem, detail::m2_src);
  const GridArray z0sq = expect_piece(field, problem, detail::diss_z0sq);
  const GridArray z1sq = expect_piece(field, problem, detail::diss_z1sq);
  const GridArray z0f = expect_piece(field, problem, detail::diss_z0f);
  const GridArray m2 = field.expect([](double, double, const Atom& a) { return a.y * a.y; });

  const int nt = static_cast<int>(time_basis.size());
  ResidualReport weak(ResidualFamily::m2_weak, {nt, static_cast<int>(space_basis.size())}, g, tolerance);
  ResidualReport diss(ResidualFamily::dissipation, {nt}, g, tolerance);
  for (std::size_t k = 0; k < time_basis.size(); ++k) {
    const Sampled phi = sample_time(time_basis[k], g);
    for (std::size_t j = 0; j < space_basis.size(); ++j)
      weak.add({static_cast<int>(k), static_cast<int>(j)}, weak_form(g, phi, sample_space(space_basis[j], g), dt, dx, src));
    GridArray values = g.zeros();
    for (int n = 0; n < g.time_points(); ++n)
      for (int i = 0; i < g.space_points(); ++i)
        values(n, i) = detail::combine_dissipation(phi.value[static_cast<std::size_t>(n)],
                                                   phi.derivative[static_cast<std::size_t>(n)], z0sq(n, i),
                                                   z1sq(n, i), z0f(n, i));
    diss.add({static_cast<int>(k)}, g.integrate(values));
  }

  ResidualReport ic(ResidualFamily::m2_ic, {}, g, tolerance);
  double ic_err = 0.0;
  for (int i = 0; i < g.space_points(); ++i) {
    const double y0 = initial_value(problem, g, initial, i);
    ic_err = std::max(ic_err, std::abs(m2(0, i) - y0 * y0));
  }
  ic.add({}, ic_err);

  ResidualReport bc(ResidualFamily::m2_bc, {}, g, tolerance);
  bc.add({}, max_abs_boundary_columns(m2));
  return {std::move(weak), std::move(ic), std::move(bc), std::move(diss)};
}

CertificateResult dual_heat_certificate(const YoungField& field, const FieldSolution& ref, const PdeProblem& problem,
                                        const Polynomial& g_source, const CertificateOptions& opts) {
  for (Var v : {Var::y, Var::z0, Var::z1})
    if (g_source.depends_on(v)) throw InvalidInput("bad-source", "certificate source may only depend on (t, x)");
  const SpaceTimeGrid& g = field.grid();
  require_same_grid(g, ref.grid, "dual_heat_certificate");

  PdeProblem heat;
  heat.T = problem.T;
  heat.f = g_source.substitute(Var::t, Polynomial(problem.T) - Polynomial::variable(Var::t));
  heat.y0 = Polynomial(0.0);
  heat.ybox = {-1.0, 1.0};
  SolveOptions so;
  so.scheme = opts.scheme;
  const FieldSolution phi = solve(heat, g, so);

  const GridArray w_hat = weighted_error_density(squared_error_density(field, ref), g, problem.lipschitz);
  GridArray integrand = g.zeros();
  for (int n = 0; n < g.time_points(); ++n)
    for (int i = 0; i < g.space_points(); ++i) integrand(n, i) = w_hat(n, i) * g_source.evaluate(g.t(n), g.x(i));

  CertificateResult r;
  r.integral = g.integrate(integrand);
  r.phi_g = phi.y;
  r.min_phi_g = phi.y.minCoeff();
  r.max_principle_ok = r.min_phi_g >= -opts.max_principle_tol;
  r.emv_consistent = r.integral <= opts.certificate_tol;
  return r;
}

}  // namespace mvrelax
