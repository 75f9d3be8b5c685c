#include "mvrelax/occupation.hpp"

#include <cmath>
#include <utility>

#include "detail/integrands.hpp"
#include "mvrelax/error.hpp"

namespace mvrelax {

namespace {

Point at(double t, double x, const Atom& a) { return {t, x, a.y, a.z0, a.z1}; }

double ipow(double v, int k) {
  double r = 1.0;
  for (int j = 0; j < k; ++j) r *= v;
  return r;
}

Polynomial txy_monomial(int a, int b, int c) { return Polynomial::monomial({a, b, c, 0, 0}); }

BoundaryTrace time_slice(const FieldSolution& sol, BoundaryPart part, int n) {
  const SpaceTimeGrid& g = sol.grid;
  BoundaryTrace tr;
  tr.part = part;
  for (int i = 0; i < g.space_points(); ++i) {
    tr.t.push_back(g.t(n));
    tr.x.push_back(g.x(i));
    tr.weight.push_back(g.space_weight(i));
    tr.cells.push_back(CellMeasure::dirac(sol.y(n, i), sol.dty(n, i), sol.dxy(n, i)));
  }
  return tr;
}

// Dirichlet data pins y = 0 and dt y = 0 on the lateral boundary.
BoundaryTrace space_slice(const FieldSolution& sol, BoundaryPart part, int i) {
  const SpaceTimeGrid& g = sol.grid;
  BoundaryTrace tr;
  tr.part = part;
  for (int n = 0; n < g.time_points(); ++n) {
    tr.t.push_back(g.t(n));
    tr.x.push_back(g.x(i));
    tr.weight.push_back(g.time_weight(n));
    tr.cells.push_back(CellMeasure::dirac(0.0, 0.0, sol.dxy(n, i)));
  }
  return tr;
}

template <typename G>
double integrate_interior(const YoungField& field, G&& g) {
  return field.grid().integrate(field.expect(std::forward<G>(g)));
}

// sum over boundary parts of int g(t, x, atom) * eta(part) dmu_part.
template <typename Eta, typename G>
double boundary_flux(const OccupationLift& lift, Eta&& eta, G&& g) {
  double acc = 0.0;
  for (BoundaryPart p : kBoundaryParts) {
    const double e = eta(p);
    if (e == 0.0) continue;
    acc += e * lift.trace(p).integrate(g);
  }
  return acc;
}

}  // namespace

double BoundaryDecomposition::eta_t(BoundaryPart p) {
  switch (p) {
    case BoundaryPart::initial: return -1.0;
    case BoundaryPart::terminal: return 1.0;
    default: return 0.0;
  }
}

double BoundaryDecomposition::eta_x(BoundaryPart p) {
  switch (p) {
    case BoundaryPart::left: return -1.0;
    case BoundaryPart::right: return 1.0;
    default: return 0.0;
  }
}

double BoundaryDecomposition::measure(BoundaryPart p, double T) {
  return (p == BoundaryPart::initial || p == BoundaryPart::terminal) ? 1.0 : T;
}

OccupationLift lift_occupation(const YoungField& field, const FieldSolution& sol) {
  require_same_grid(field.grid(), sol.grid, "lift_occupation");
  const SpaceTimeGrid& g = sol.grid;
  return {field,
          {time_slice(sol, BoundaryPart::initial, 0), time_slice(sol, BoundaryPart::terminal, g.nt()),
           space_slice(sol, BoundaryPart::left, 0), space_slice(sol, BoundaryPart::right, g.nx() + 1)}};
}

OccupationLift reassign_corners(const OccupationLift& lift) {
  OccupationLift out = lift;
  auto& ini = out.trace(BoundaryPart::initial).cells;
  auto& ter = out.trace(BoundaryPart::terminal).cells;
  auto& lft = out.trace(BoundaryPart::left).cells;
  auto& rgt = out.trace(BoundaryPart::right).cells;
  std::swap(ini.front(), lft.front());
  std::swap(ini.back(), rgt.front());
  std::swap(ter.front(), lft.back());
  std::swap(ter.back(), rgt.back());
  return out;
}

OccupationMasses occupation_masses(const OccupationLift& lift) {
  const auto one = [](double, double, const Atom&) { return 1.0; };
  return {integrate_interior(lift.interior, one), lift.trace(BoundaryPart::initial).integrate(one),
          lift.trace(BoundaryPart::terminal).integrate(one),
          lift.trace(BoundaryPart::left).integrate(one) + lift.trace(BoundaryPart::right).integrate(one)};
}

double occupation_ibp_residual(const OccupationLift& lift, const Polynomial& phi, IbpDirection dir) {
  const bool time = dir == IbpDirection::time;
  const Polynomial d_phi = phi.derivative(time ? Var::t : Var::x);
  const Polynomial dy_phi = phi.derivative(Var::y);
  const double interior = integrate_interior(lift.interior, [&](double t, double x, const Atom& a) {
    const Point p = at(t, x, a);
    return d_phi(p) + (time ? a.z0 : a.z1) * dy_phi(p);
  });
  const double flux = boundary_flux(
      lift, [&](BoundaryPart p) { return time ? BoundaryDecomposition::eta_t(p) : BoundaryDecomposition::eta_x(p); },
      [&](double t, double x, const Atom& a) { return phi(at(t, x, a)); });
  return interior - flux;
}

double occupation_weak_residual(const OccupationLift& lift, const PdeProblem& problem, const Polynomial& phi) {
  const Polynomial dx_phi = phi.derivative(Var::x);
  const Polynomial dy_phi = phi.derivative(Var::y);
  const double interior = integrate_interior(lift.interior, [&](double t, double x, const Atom& a) {
    const Point p = at(t, x, a);
    return phi(p) * (a.z0 - problem.f.evaluate(t, x, a.y)) + (dx_phi(p) + a.z1 * dy_phi(p)) * a.z1;
  });
  const double flux = boundary_flux(lift, BoundaryDecomposition::eta_x,
                                    [&](double t, double x, const Atom& a) { return phi(at(t, x, a)) * a.z1; });
  return interior - flux;
}

double occupation_dissipation_residual(const OccupationLift& lift, const PdeProblem& problem,
                                       const TimeTestFn& phi) {
  const double interior = integrate_interior(lift.interior, [&](double t, double x, const Atom& a) {
    const detail::AtomValues v{a.y, a.z0, a.z1, problem.f.evaluate(t, x, a.y)};
    return detail::combine_dissipation(phi.value(t), phi.derivative(t), detail::diss_z0sq(v), detail::diss_z1sq(v),
                                       detail::diss_z0f(v));
  });
  const double flux = boundary_flux(lift, BoundaryDecomposition::eta_t,
                                    [&](double t, double, const Atom& a) { return phi.value(t) * a.z1 * a.z1; });
  return interior + 0.5 * flux;
}

std::vector<ResidualReport> marginal_residuals(const OccupationLift& lift, const PdeProblem& problem, int max_degree,
                                               double tolerance, std::span<const double> initial) {
  if (max_degree < 0) throw InvalidInput("bad-basis", "max_degree must be nonnegative");
  if (!initial.empty() && initial.size() != lift.trace(BoundaryPart::initial).x.size())
    throw InvalidInput("bad-initial-data", "initial samples must match the initial trace");
  const SpaceTimeGrid& g = lift.interior.grid();
  const int D = max_degree;

  ResidualReport ic(ResidualFamily::occupation_ic, {D + 1, D + 1}, g, tolerance);
  const BoundaryTrace& ini = lift.trace(BoundaryPart::initial);
  for (int b = 0; b <= D; ++b)
    for (int c = 0; b + c <= D; ++c) {
      const double lhs = ini.integrate([&](double, double x, const Atom& a) { return ipow(x, b) * ipow(a.y, c); });
      double rhs = 0.0;
      for (std::size_t k = 0; k < ini.x.size(); ++k)
        rhs += ini.weight[k] *
               (ipow(ini.x[k], b) * ipow(initial.empty() ? problem.y0.evaluate(0.0, ini.x[k]) : initial[k], c));
      ic.add({b, c}, lhs - rhs);
    }

  ResidualReport bc(ResidualFamily::occupation_bc, {2, D + 1, D + 1}, g, tolerance);
  for (int side = 0; side < 2; ++side) {
    const BoundaryTrace& tr = lift.trace(side == 0 ? BoundaryPart::left : BoundaryPart::right);
    for (int a = 0; a <= D; ++a)
      for (int c = 0; a + c <= D; ++c) {
        const double lhs = tr.integrate([&](double t, double, const Atom& at) { return ipow(t, a) * ipow(at.y, c); });
        double rhs = 0.0;
        if (c == 0)
          for (std::size_t k = 0; k < tr.t.size(); ++k) rhs += tr.weight[k] * ipow(tr.t[k], a);
        bc.add({side, a, c}, lhs - rhs);
      }
  }

  // Parts 0..3 follow kBoundaryParts; part 4 is the interior measure.
  ResidualReport norm(ResidualFamily::occupation_normalization, {5, D + 1, D + 1}, g, tolerance);
  for (std::size_t p = 0; p < kBoundaryParts.size(); ++p) {
    const BoundaryTrace& tr = lift.boundary[p];
    const bool along_x = tr.part == BoundaryPart::initial || tr.part == BoundaryPart::terminal;
    for (int k = 0; k <= D; ++k) {
      const auto psi = [&](double t, double x) { return ipow(along_x ? x : t, k); };
      const double lhs = tr.integrate([&](double t, double x, const Atom&) { return psi(t, x); });
      double rhs = 0.0;
      for (std::size_t j = 0; j < tr.t.size(); ++j) rhs += tr.weight[j] * psi(tr.t[j], tr.x[j]);
      norm.add({static_cast<int>(p), along_x ? 0 : k, along_x ? k : 0}, lhs - rhs);
    }
  }
  for (int a = 0; a <= D; ++a)
    for (int b = 0; a + b <= D; ++b) {
      const double lhs = integrate_interior(lift.interior,
                                            [&](double t, double x, const Atom&) { return ipow(t, a) * ipow(x, b); });
      GridArray ref = g.zeros();
      for (int n = 0; n < g.time_points(); ++n)
        for (int i = 0; i < g.space_points(); ++i) ref(n, i) = ipow(g.t(n), a) * ipow(g.x(i), b);
      norm.add({4, a, b}, lhs - g.integrate(ref));
    }
  return {std::move(ic), std::move(bc), std::move(norm)};
}

std::vector<ResidualReport> occupation_identity_suite(const OccupationLift& lift, const PdeProblem& problem,
                                                      int max_degree, double tolerance) {
  if (max_degree < 0) throw InvalidInput("bad-basis", "max_degree must be nonnegative");
  const SpaceTimeGrid& g = lift.interior.grid();
  const int D = max_degree;
  const std::vector<int> dims{D + 1, D + 1, D + 1};
  ResidualReport it(ResidualFamily::occupation_ibp_time, dims, g, tolerance);
  ResidualReport is(ResidualFamily::occupation_ibp_space, dims, g, tolerance);
  ResidualReport weak(ResidualFamily::occupation_weak, dims, g, tolerance);
  for (int a = 0; a <= D; ++a)
    for (int b = 0; a + b <= D; ++b)
      for (int c = 0; a + b + c <= D; ++c) {
        const Polynomial phi = txy_monomial(a, b, c);
        it.add({a, b, c}, occupation_ibp_residual(lift, phi, IbpDirection::time));
        is.add({a, b, c}, occupation_ibp_residual(lift, phi, IbpDirection::space));
        weak.add({a, b, c}, occupation_weak_residual(lift, problem, phi));
      }
  ResidualReport diss(ResidualFamily::occupation_dissipation, {D + 1}, g, tolerance);
  for (int a = 0; a <= D; ++a)
    diss.add({a}, occupation_dissipation_residual(lift, problem,
                                                  TimeTestFn::polynomial(g.horizon(), txy_monomial(a, 0, 0))));
  return {std::move(it), std::move(is), std::move(weak), std::move(diss)};
}

}  // namespace mvrelax
