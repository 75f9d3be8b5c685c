#include "mvrelax/young_measure.hpp"

#include <cmath>

#include <fmt/format.h>

#include "detail/integrands.hpp"
#include "mvrelax/error.hpp"

namespace mvrelax {

CellMeasure::CellMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw InvalidInput("bad-measure", "a cell measure needs at least one atom");
  double total = 0.0;
  for (const Atom& a : atoms_) {
    if (!(a.weight > 0.0 && a.weight <= 1.0))
      throw InvalidInput("bad-measure", fmt::format("atom weight {} outside (0,1]", a.weight));
    if (!std::isfinite(a.y) || !std::isfinite(a.z0) || !std::isfinite(a.z1))
      throw InvalidInput("bad-measure", "atom coordinates must be finite");
    total += a.weight;
  }
  if (std::abs(total - 1.0) > kWeightTolerance)
    throw InvalidInput("bad-measure", fmt::format("atom weights sum to {}, not 1", total));
}

YoungField::YoungField(SpaceTimeGrid grid, std::vector<CellMeasure> cells)
    : grid_(grid), cells_(std::move(cells)) {
  const auto expected = static_cast<std::size_t>(grid_.time_points() * grid_.space_points());
  if (cells_.size() != expected)
    throw InvalidInput("bad-measure", fmt::format("expected {} cells, got {}", expected, cells_.size()));
  for (const CellMeasure& c : cells_)
    if (c.atoms().empty()) throw InvalidInput("bad-measure", "every cell needs at least one atom");
}

int YoungField::count_box_violations(const Interval& ybox, const DerivativeBox& zbox) const {
  int count = 0;
  for (const CellMeasure& c : cells_)
    for (const Atom& a : c.atoms())
      if (!ybox.contains(a.y) || !zbox.contains(a.z0, a.z1)) ++count;
  return count;
}

YoungField lift_dirac(const FieldSolution& sol) {
  const SpaceTimeGrid& g = sol.grid;
  std::vector<CellMeasure> cells;
  cells.reserve(static_cast<std::size_t>(g.time_points() * g.space_points()));
  for (int n = 0; n < g.time_points(); ++n)
    for (int i = 0; i < g.space_points(); ++i)
      cells.push_back(CellMeasure::dirac(sol.y(n, i), sol.dty(n, i), sol.dxy(n, i)));
  return {g, std::move(cells)};
}

GridArray pair(const YoungField& field, const Polynomial& g) {
  return field.expect([&](double t, double x, const Atom& a) { return g(Point{t, x, a.y, a.z0, a.z1}); });
}

MomentFields moments(const YoungField& field, const PdeProblem& problem) {
  const Polynomial& f = problem.f;
  const auto atom = [&](double t, double x, const Atom& a) {
    return detail::AtomValues{a.y, a.z0, a.z1, f.evaluate(t, x, a.y)};
  };
  MomentFields m;
  m.m1 = field.expect([](double, double, const Atom& a) { return a.y; });
  m.m2 = field.expect([](double, double, const Atom& a) { return a.y * a.y; });
  m.mf = field.expect([&](double t, double x, const Atom& a) { return atom(t, x, a).f; });
  m.mfhat = field.expect([&](double t, double x, const Atom& a) { return detail::m2_src(atom(t, x, a)); });
  m.mz0 = field.expect([](double, double, const Atom& a) { return a.z0; });
  m.mz0sq = field.expect([](double, double, const Atom& a) { return a.z0 * a.z0; });
  m.mzbarsq = field.expect([](double, double, const Atom& a) { return a.z1 * a.z1; });
  return m;
}

namespace {

// <(coordinate - ref)^2> per node.
template <typename Coord>
GridArray centered_second_moment(const YoungField& field, const GridArray& ref, Coord&& coord) {
  const SpaceTimeGrid& g = field.grid();
  GridArray out = g.zeros();
  for (int n = 0; n < g.time_points(); ++n)
    for (int i = 0; i < g.space_points(); ++i) {
      const double r = ref(n, i);
      out(n, i) = field.cell(n, i).expect([&](const Atom& a) {
        const double d = coord(a) - r;
        return d * d;
      });
    }
  return out;
}

}  // namespace

GridArray squared_error_density(const YoungField& field, const FieldSolution& ref) {
  require_same_grid(field.grid(), ref.grid, "squared_error_density");
  return centered_second_moment(field, ref.y, [](const Atom& a) { return a.y; });
}

GridArray squared_error_density_expanded(const YoungField& field, const FieldSolution& ref) {
  require_same_grid(field.grid(), ref.grid, "squared_error_density_expanded");
  const GridArray m1 = field.expect([](double, double, const Atom& a) { return a.y; });
  const GridArray m2 = field.expect([](double, double, const Atom& a) { return a.y * a.y; });
  return m2 - 2.0 * ref.y * m1 + ref.y.square();
}

GridArray weighted_error_density(const GridArray& w, const SpaceTimeGrid& grid, double lipschitz) {
  if (!grid.same_shape(w)) throw GridMismatch("weighted_error_density: array shape differs from grid");
  GridArray out = w;
  for (int n = 0; n < grid.time_points(); ++n) out.row(n) *= std::exp(-2.0 * grid.t(n) * lipschitz);
  return out;
}

BumpSpec BumpSpec::with_peak(double T, double peak) {
  const double half = 0.5 * T;
  return {T, 16.0 * peak / (half * half * half * half)};
}

double BumpSpec::peak() const {
  const double half = 0.5 * T;
  return amplitude * half * half * half * half / 16.0;
}

double BumpSpec::value(double t, double x) const {
  const double a = t * (T - t);
  const double b = x * (1.0 - x);
  return amplitude * a * a * b * b;
}

double BumpSpec::dt(double t, double x) const {
  const double a = t * (T - t);
  const double b = x * (1.0 - x);
  return amplitude * 2.0 * a * (T - 2.0 * t) * b * b;
}

double BumpSpec::dx(double t, double x) const {
  const double a = t * (T - t);
  const double b = x * (1.0 - x);
  return amplitude * a * a * 2.0 * b * (1.0 - 2.0 * x);
}

Polynomial BumpSpec::polynomial() const {
  const Polynomial t = Polynomial::variable(Var::t);
  const Polynomial x = Polynomial::variable(Var::x);
  return amplitude * (t * (Polynomial(T) - t)).pow(2) * (x * (Polynomial(1.0) - x)).pow(2);
}

YoungField counterexample_field(const SpaceTimeGrid& grid, const BumpSpec& bump) {
  if (std::abs(grid.horizon() - bump.T) > 1e-14 * bump.T)
    throw GridMismatch("counterexample_field: bump horizon differs from grid horizon");
  std::vector<CellMeasure> cells;
  cells.reserve(static_cast<std::size_t>(grid.time_points() * grid.space_points()));
  for (int n = 0; n < grid.time_points(); ++n) {
    const double t = grid.t(n);
    for (int i = 0; i < grid.space_points(); ++i) {
      const double x = grid.x(i);
      const double g = bump.value(t, x);
      const double gt = bump.dt(t, x);
      const double gx = bump.dx(t, x);
      cells.emplace_back(std::vector<Atom>{{g, gt, gx, 0.5}, {-g, -gt, -gx, 0.5}});
    }
  }
  return {grid, std::move(cells)};
}

ConcentrationReport marginal_concentration_report(const YoungField& field, const FieldSolution& ref) {
  require_same_grid(field.grid(), ref.grid, "marginal_concentration_report");
  ConcentrationReport r;
  r.sup_w = centered_second_moment(field, ref.y, [](const Atom& a) { return a.y; }).maxCoeff();
  r.sup_zbar_var = centered_second_moment(field, ref.dxy, [](const Atom& a) { return a.z1; }).maxCoeff();
  r.sup_z0_var = centered_second_moment(field, ref.dty, [](const Atom& a) { return a.z0; }).maxCoeff();
  return r;
}

}  // namespace mvrelax
