#include "mvrelax/moment_relax.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <tuple>

#include <fmt/format.h>

#include "mvrelax/error.hpp"

namespace mvrelax {

namespace {

constexpr std::size_t idx(Var v) { return static_cast<std::size_t>(v); }

BoundaryPart boundary_part(MeasureId m) {
  switch (m) {
    case MeasureId::initial:
      return BoundaryPart::initial;
    case MeasureId::terminal:
      return BoundaryPart::terminal;
    case MeasureId::left:
      return BoundaryPart::left;
    case MeasureId::right:
      return BoundaryPart::right;
    case MeasureId::interior:
      break;
  }
  throw InvalidInput("bad-measure", "the interior measure has no boundary part");
}

double constant_value(const Polynomial& p) { return p.coefficient(Exponents{}); }

std::string exponent_label(const Exponents& e) {
  std::string out;
  for (int v = 0; v < kNumVars; ++v) {
    if (e[static_cast<std::size_t>(v)] == 0) continue;
    if (!out.empty()) out += '*';
    out += fmt::format("{}^{}", var_name(static_cast<Var>(v)), e[static_cast<std::size_t>(v)]);
  }
  return out.empty() ? "1" : out;
}

// Accumulates int p dmu_m into `acc` and `constant`; returns the degree of
// the part that needs moments (solver coordinates), or -1 when there is none.
// On pieces with a known state and marginal, the z1-free part of p depends on
// the marginal coordinate only and is integrated exactly.
int accumulate(const RelaxationProblem& rp, MeasureId m, const Polynomial& p, std::map<int, double>& acc,
               double& constant, bool allow_overflow) {
  const MeasureLayout& layout = rp.measure(m);
  Polynomial q = p;
  if (layout.pinned) q = q.pin(layout.pinned->first, layout.pinned->second);
  if (layout.state) q = q.substitute(Var::y, *layout.state);
  if (layout.marginal) {
    Polynomial known;
    Polynomial rest;
    for (const auto& [e, c] : q.terms()) (e[idx(Var::z1)] == 0 ? known : rest) += Polynomial::monomial(e, c);
    for (const auto& [e, c] : known.terms())
      for (int v = 0; v < kNumVars; ++v)
        if (e[static_cast<std::size_t>(v)] != 0 && static_cast<Var>(v) != *layout.marginal)
          throw InvalidInput("unknown-moment", fmt::format("{} measure has no coordinate {}", measure_name(m),
                                                           var_name(static_cast<Var>(v))));
    constant += constant_value(known.integrate(*layout.marginal, layout.marginal_range.lo, layout.marginal_range.hi));
    q = rest;
  }
  q = rp.map.to_solver(q);
  int degree = -1;
  for (const auto& [e, c] : q.terms()) {
    for (int v = 0; v < kNumVars; ++v) {
      if (e[static_cast<std::size_t>(v)] == 0) continue;
      if (std::find(layout.vars.begin(), layout.vars.end(), static_cast<Var>(v)) == layout.vars.end())
        throw InvalidInput("unknown-moment", fmt::format("{} measure has no coordinate {}", measure_name(m),
                                                         var_name(static_cast<Var>(v))));
    }
    degree = std::max(degree, total_degree(e));
    if (!layout.has(e)) {
      if (allow_overflow) continue;
      throw InvalidInput("unknown-moment",
                         fmt::format("moment {} of the {} measure exceeds degree {}", exponent_label(e),
                                     measure_name(m), 2 * rp.degree));
    }
    acc[layout.variable(e)] += c;
  }
  return degree;
}

SparseTerms finish(const std::map<int, double>& acc) {
  double scale = 0.0;
  for (const auto& [k, c] : acc) scale = std::max(scale, std::abs(c));
  SparseTerms out;
  for (const auto& [k, c] : acc)
    if (std::abs(c) > 1e-14 * scale) out.emplace_back(k, c);
  return out;
}

struct Piece {
  MeasureId measure;
  Polynomial integrand;
};

// Adds sum over pieces of int integrand dmu = rhs, or records the row as
// skipped when an integrand needs moments beyond 2d. A row left without
// moments is dropped when it holds identically and kept otherwise, so that
// a contradiction reaches the solver.
void add_identity(RelaxationProblem& rp, RowFamily family, const std::string& label, const std::vector<Piece>& pieces,
                  double rhs) {
  std::map<int, double> acc;
  double constant = 0.0;
  int degree = -1;
  for (const Piece& piece : pieces)
    degree = std::max(degree, accumulate(rp, piece.measure, piece.integrand, acc, constant, true));
  if (degree > 2 * rp.degree) {
    rp.skipped.push_back({family, label, degree});
    return;
  }
  SparseTerms terms = finish(acc);
  const double value = rhs - constant;
  if (terms.empty() && std::abs(value) <= 1e-12 * (1.0 + std::abs(rhs) + std::abs(constant))) return;
  rp.add_row(family, label, std::move(terms), value);
}

MeasureLayout make_layout(MeasureId id, std::vector<Var> vars, std::optional<std::pair<Var, double>> pinned,
                          double mass, int offset, int max_degree) {
  MeasureLayout layout;
  layout.id = id;
  layout.vars = std::move(vars);
  layout.pinned = pinned;
  layout.mass = mass;
  layout.offset = offset;
  layout.monomials = enumerate_monomials(layout.vars, max_degree);
  for (int k = 0; k < layout.size(); ++k) layout.index.emplace(layout.monomials[static_cast<std::size_t>(k)].exponents, k);
  return layout;
}

// Box-normalized coordinate sigma_v in [-1, 1], as a polynomial in solver
// coordinates.
Polynomial box_coordinate(const RelaxationProblem& rp, Var v) {
  const auto k = idx(v);
  const Polynomial u = Polynomial(rp.map.shift[k]) + rp.map.scale[k] * Polynomial::variable(v);
  return (u - Polynomial(rp.box.shift[k])) * (1.0 / rp.box.scale[k]);
}

// Orthonormal Legendre polynomials sqrt(2k+1) P_k(sigma), k = 0..n.
std::vector<Polynomial> legendre(const Polynomial& sigma, int n) {
  std::vector<Polynomial> p{Polynomial(1.0), sigma};
  for (int k = 1; k < n; ++k)
    p.push_back(((2.0 * k + 1.0) * sigma * p[static_cast<std::size_t>(k)] - k * p[static_cast<std::size_t>(k - 1)]) *
                (1.0 / (k + 1.0)));
  p.resize(static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k) p[static_cast<std::size_t>(k)] *= std::sqrt(2.0 * k + 1.0);
  return p;
}

// Basis polynomials (solver coordinates) indexing the rows of the moment and
// localizing matrices: monomials s^a, or tensor Legendre polynomials of the
// box coordinates. Both span the same space, so the matrices are congruent.
std::vector<Polynomial> matrix_basis(const RelaxationProblem& rp, const MeasureLayout& layout, int degree) {
  const auto exps = enumerate_monomials(layout.vars, degree);
  std::array<std::vector<Polynomial>, kNumVars> factors;
  for (Var v : layout.vars) {
    if (rp.options.basis == MomentBasis::legendre) {
      factors[idx(v)] = legendre(box_coordinate(rp, v), degree);
    } else {
      const Polynomial s = Polynomial::variable(v);
      for (int k = 0; k <= degree; ++k) factors[idx(v)].push_back(s.pow(k));
    }
  }
  std::vector<Polynomial> out;
  for (const MonomialIndex& m : exps) {
    Polynomial p(1.0);
    for (Var v : layout.vars) p *= factors[idx(v)][static_cast<std::size_t>(m.exponents[idx(v)])];
    out.push_back(std::move(p));
  }
  return out;
}

// Moment form of q, q already in solver coordinates.
SparseTerms solver_functional(const MeasureLayout& layout, const Polynomial& q) {
  std::map<int, double> acc;
  for (const auto& [e, c] : q.terms()) acc[layout.variable(e)] += c;
  return finish(acc);
}

PsdBlock make_block(std::string name, const MeasureLayout& layout, const std::vector<Polynomial>& basis,
                    const Polynomial& weight) {
  PsdBlock block{std::move(name), layout.id, static_cast<int>(basis.size()), {}};
  block.entries.resize(static_cast<std::size_t>(block.dim * (block.dim + 1) / 2));
  for (int j = 0; j < block.dim; ++j) {
    const Polynomial wj = weight * basis[static_cast<std::size_t>(j)];
    for (int i = 0; i <= j; ++i)
      block.entries[static_cast<std::size_t>(PsdBlock::packed(i, j))] =
          solver_functional(layout, wj * basis[static_cast<std::size_t>(i)]);
  }
  return block;
}

void add_blocks(RelaxationProblem& rp, const MeasureLayout& layout) {
  rp.blocks.push_back(make_block(fmt::format("moment:{}", measure_name(layout.id)), layout,
                                 matrix_basis(rp, layout, rp.degree), Polynomial(1.0)));
  const auto half = matrix_basis(rp, layout, rp.degree - 1);
  for (Var v : layout.vars) {
    // 1 - sigma_v^2 is a positive multiple of the box polynomial of v.
    const Polynomial g = Polynomial(1.0) - box_coordinate(rp, v).pow(2);
    rp.blocks.push_back(make_block(fmt::format("localizing:{}:{}", measure_name(layout.id), var_name(v)), layout,
                                   half, g));
  }
}

}  // namespace

std::vector<MonomialIndex> enumerate_monomials(std::span<const Var> vars, int max_degree) {
  std::vector<MonomialIndex> out;
  Exponents e{};
  std::function<void(std::size_t, int)> rec = [&](std::size_t k, int left) {
    if (k == vars.size()) {
      out.push_back({e});
      return;
    }
    for (int p = 0; p <= left; ++p) {
      e[idx(vars[k])] = p;
      rec(k + 1, left - p);
    }
    e[idx(vars[k])] = 0;
  };
  if (max_degree >= 0) rec(0, max_degree);
  std::sort(out.begin(), out.end(),
            [](const MonomialIndex& a, const MonomialIndex& b) { return GradedLexLess{}(a.exponents, b.exponents); });
  return out;
}

std::string_view measure_name(MeasureId m) {
  switch (m) {
    case MeasureId::interior:
      return "interior";
    case MeasureId::initial:
      return "initial";
    case MeasureId::terminal:
      return "terminal";
    case MeasureId::left:
      return "left";
    case MeasureId::right:
      return "right";
  }
  return "unknown";
}

std::string_view row_family_name(RowFamily f) {
  switch (f) {
    case RowFamily::ibp_time:
      return "ibp-time";
    case RowFamily::ibp_space:
      return "ibp-space";
    case RowFamily::weak:
      return "weak";
    case RowFamily::dissipation:
      return "dissipation";
    case RowFamily::initial:
      return "initial";
    case RowFamily::lateral:
      return "lateral";
    case RowFamily::normalization:
      return "normalization";
    case RowFamily::interior_marginal:
      return "interior-marginal";
    case RowFamily::custom:
      return "custom";
  }
  return "unknown";
}

std::string_view sense_name(Sense s) { return s == Sense::min ? "min" : "max"; }

int MeasureLayout::variable(const Exponents& e) const {
  const auto it = index.find(e);
  if (it == index.end())
    throw InvalidInput("unknown-moment",
                       fmt::format("moment {} is not in the {} layout", exponent_label(e), measure_name(id)));
  return offset + it->second;
}

Polynomial AffineMap::to_solver(const Polynomial& p) const {
  Polynomial out = p;
  for (int v = 0; v < kNumVars; ++v) {
    const auto k = static_cast<std::size_t>(v);
    if (shift[k] == 0.0 && scale[k] == 1.0) continue;
    const Var var = static_cast<Var>(v);
    if (!out.depends_on(var)) continue;
    out = out.substitute(var, Polynomial(shift[k]) + scale[k] * Polynomial::variable(var));
  }
  return out;
}

Polynomial AffineMap::solver_coordinate(Var v) const {
  const auto k = idx(v);
  return (Polynomial::variable(v) - Polynomial(shift[k])) * (1.0 / scale[k]);
}

Eigen::MatrixXd PsdBlock::evaluate(const Eigen::VectorXd& moments) const {
  Eigen::MatrixXd m(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i <= j; ++i) {
      double v = 0.0;
      for (const auto& [k, c] : entries[static_cast<std::size_t>(packed(i, j))]) v += c * moments(k);
      m(i, j) = v;
      m(j, i) = v;
    }
  return m;
}

int RelaxationProblem::count(RowFamily f) const {
  return static_cast<int>(std::count_if(rows.begin(), rows.end(), [f](const EqualityRow& r) { return r.family == f; }));
}

LinearForm RelaxationProblem::functional(MeasureId m, const Polynomial& p) const {
  std::map<int, double> acc;
  LinearForm out;
  accumulate(*this, m, p, acc, out.constant, false);
  out.terms = finish(acc);
  return out;
}

double RelaxationProblem::integrate(MeasureId m, const Polynomial& p, const Eigen::VectorXd& moments) const {
  const LinearForm form = functional(m, p);
  double v = form.constant;
  for (const auto& [k, c] : form.terms) v += c * moments(k);
  return v;
}

void RelaxationProblem::add_row(RowFamily family, std::string label, SparseTerms terms, double rhs) {
  std::sort(terms.begin(), terms.end());
  SparseTerms merged;
  for (const auto& [k, c] : terms) {
    if (k < 0 || k >= num_moments) throw InvalidInput("unknown-moment", fmt::format("moment index {} out of range", k));
    if (!merged.empty() && merged.back().first == k)
      merged.back().second += c;
    else
      merged.emplace_back(k, c);
  }
  rows.push_back({family, std::move(label), std::move(merged), rhs});
}

RelaxationProblem assemble(const PdeProblem& problem, int d, const Polynomial& objective, Sense sense,
                           const AssembleOptions& opts) {
  if (d < 1) throw InvalidInput("degree-too-low", "relaxation degree must be at least 1");
  const int needed = std::max(problem.f.degree(), problem.y0.degree());
  if (2 * d < needed)
    throw InvalidInput("degree-too-low", fmt::format("degree {} cannot hold data of degree {}", d, needed));
  if (objective.degree() > 2 * d)
    throw InvalidInput("bad-objective", fmt::format("objective degree {} exceeds {}", objective.degree(), 2 * d));

  const double T = problem.T;
  RelaxationProblem rp;
  rp.degree = d;
  rp.T = T;
  rp.sense = sense;
  rp.objective = objective;
  rp.options = opts;
  rp.box.shift = {0.5 * T, 0.5, problem.ybox.center(), 0.0, 0.0};
  rp.box.scale = {0.5 * T, 0.5, 0.5 * problem.ybox.width(), problem.zbox.z0_max, problem.zbox.z1_max};
  if (opts.rescale) rp.map = rp.box;

  const int two_d = 2 * d;
  int offset = 0;
  auto push = [&](MeasureId id, std::vector<Var> vars, std::optional<std::pair<Var, double>> pinned, double mass) {
    rp.measures.push_back(make_layout(id, std::move(vars), pinned, mass, offset, two_d));
    offset += rp.measures.back().size();
    return &rp.measures.back();
  };
  // The initial and lateral conditions fix y on their pieces, so those
  // measures carry no y coordinate: y = y0(x) at t = 0 and y = 0 at x = 0, 1.
  // Their (x or t) marginal is the surface measure.
  push(MeasureId::interior, {Var::t, Var::x, Var::y, Var::z0, Var::z1}, std::nullopt, T);
  MeasureLayout* initial = push(MeasureId::initial, {Var::x, Var::z1}, std::pair{Var::t, 0.0}, 1.0);
  initial->state = problem.y0;
  initial->marginal = Var::x;
  initial->marginal_range = {0.0, 1.0};
  push(MeasureId::terminal, {Var::x, Var::y, Var::z1}, std::pair{Var::t, T}, 1.0);
  for (MeasureId b : {MeasureId::left, MeasureId::right}) {
    MeasureLayout* lateral =
        push(b, {Var::t, Var::z1}, std::pair{Var::x, b == MeasureId::left ? 0.0 : 1.0}, T);
    lateral->state = Polynomial(0.0);
    lateral->marginal = Var::t;
    lateral->marginal_range = {0.0, T};
  }
  rp.num_moments = offset;

  const Polynomial z0 = Polynomial::variable(Var::z0);
  const Polynomial z1 = Polynomial::variable(Var::z1);
  const Polynomial& f = problem.f;
  const std::array<Polynomial, 3> coord{rp.map.solver_coordinate(Var::t), rp.map.solver_coordinate(Var::x),
                                        rp.map.solver_coordinate(Var::y)};
  auto test_function = [&](const Exponents& e) {
    Polynomial phi(1.0);
    for (std::size_t k = 0; k < coord.size(); ++k) phi *= coord[k].pow(e[k]);
    return phi;
  };
  constexpr std::array<MeasureId, 4> kBoundary{MeasureId::initial, MeasureId::terminal, MeasureId::left,
                                               MeasureId::right};

  const std::array<Var, 3> txy{Var::t, Var::x, Var::y};
  for (const MonomialIndex& m : enumerate_monomials(txy, two_d - 1)) {
    const Polynomial phi = test_function(m.exponents);
    const std::string label = fmt::format("phi={}", exponent_label(m.exponents));
    const Polynomial phi_y = phi.derivative(Var::y);
    const Polynomial phi_x = phi.derivative(Var::x);

    std::vector<Piece> time{{MeasureId::interior, phi.derivative(Var::t) + z0 * phi_y}};
    std::vector<Piece> space{{MeasureId::interior, phi_x + z1 * phi_y}};
    for (MeasureId b : kBoundary) {
      const BoundaryPart part = boundary_part(b);
      if (BoundaryDecomposition::eta_t(part) != 0.0)
        time.push_back({b, -BoundaryDecomposition::eta_t(part) * phi});
      if (BoundaryDecomposition::eta_x(part) != 0.0)
        space.push_back({b, -BoundaryDecomposition::eta_x(part) * phi});
    }
    add_identity(rp, RowFamily::ibp_time, label, time, 0.0);
    add_identity(rp, RowFamily::ibp_space, label, space, 0.0);

    if (!opts.second_order_rows && m.exponents[idx(Var::y)] > 0) continue;
    std::vector<Piece> weak{{MeasureId::interior, phi * (z0 - f) + (phi_x + z1 * phi_y) * z1}};
    for (MeasureId b : {MeasureId::left, MeasureId::right})
      weak.push_back({b, -BoundaryDecomposition::eta_x(boundary_part(b)) * phi * z1});
    add_identity(rp, RowFamily::weak, label, weak, 0.0);
  }

  if (opts.second_order_rows) {
    for (int a = 0; a <= two_d - 2; ++a) {
      const Polynomial phi = coord[0].pow(a);
      const Polynomial dphi = phi.derivative(Var::t);
      std::vector<Piece> pieces{{MeasureId::interior, phi * z0.pow(2) - 0.5 * dphi * z1.pow(2) - phi * z0 * f}};
      for (MeasureId b : {MeasureId::initial, MeasureId::terminal})
        pieces.push_back({b, 0.5 * BoundaryDecomposition::eta_t(boundary_part(b)) * phi * z1.pow(2)});
      add_identity(rp, RowFamily::dissipation, fmt::format("phi=t^{}", a), pieces, 0.0);
    }
  }

  // Marginal rows: every pure (t, x) moment of each measure equals its
  // surface (or Lebesgue) integral. On the initial and lateral pieces these
  // rows, with the substituted state, carry the initial and boundary data.
  auto marginal_rows = [&](MeasureId id, RowFamily family) {
    const MeasureLayout& layout = rp.measure(id);
    std::vector<Var> vars;
    for (Var v : layout.vars)
      if (v == Var::t || v == Var::x) vars.push_back(v);
    for (const MonomialIndex& m : enumerate_monomials(vars, two_d)) {
      const Polynomial phi = test_function(m.exponents);
      Polynomial integral = phi;
      for (Var v : vars) integral = integral.integrate(v, 0.0, v == Var::t ? T : 1.0);
      rp.add_row(family, fmt::format("{}:phi={}", measure_name(id), exponent_label(m.exponents)),
                 solver_functional(layout, rp.map.to_solver(phi)), constant_value(integral));
    }
  };
  marginal_rows(MeasureId::interior, RowFamily::interior_marginal);
  marginal_rows(MeasureId::initial, RowFamily::initial);
  marginal_rows(MeasureId::terminal, RowFamily::normalization);
  marginal_rows(MeasureId::left, RowFamily::lateral);
  marginal_rows(MeasureId::right, RowFamily::lateral);

  for (const MeasureLayout& layout : rp.measures) add_blocks(rp, layout);

  rp.cost = Eigen::VectorXd::Zero(rp.num_moments);
  for (const auto& [k, c] : rp.functional(MeasureId::interior, objective).terms) rp.cost(k) += c;
  return rp;
}

Eigen::VectorXd lift_moments(const RelaxationProblem& rp, const OccupationLift& lift) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(rp.num_moments);
  const int top = 2 * rp.degree;
  std::array<std::vector<double>, kNumVars> powers;
  for (auto& p : powers) p.resize(static_cast<std::size_t>(top + 1));

  // Adds weight * s^e for every monomial of the layout at problem point u.
  auto deposit = [&](const MeasureLayout& layout, const Point& u, double weight) {
    for (Var v : layout.vars) {
      const auto k = idx(v);
      const double s = (u[k] - rp.map.shift[k]) / rp.map.scale[k];
      powers[k][0] = 1.0;
      for (int j = 1; j <= top; ++j) powers[k][static_cast<std::size_t>(j)] = powers[k][static_cast<std::size_t>(j - 1)] * s;
    }
    for (int m = 0; m < layout.size(); ++m) {
      const Exponents& e = layout.monomials[static_cast<std::size_t>(m)].exponents;
      double v = weight;
      for (Var var : layout.vars) v *= powers[idx(var)][static_cast<std::size_t>(e[idx(var)])];
      out(layout.offset + m) += v;
    }
  };

  const SpaceTimeGrid& grid = lift.interior.grid();
  if (std::abs(grid.horizon() - rp.T) > 1e-14 * rp.T) throw GridMismatch("lift_moments: grid horizon differs from T");
  const MeasureLayout& interior = rp.measure(MeasureId::interior);
  for (int n = 0; n < grid.time_points(); ++n)
    for (int i = 0; i < grid.space_points(); ++i) {
      const double w = grid.time_weight(n) * grid.space_weight(i);
      for (const Atom& a : lift.interior.cell(n, i).atoms())
        deposit(interior, {grid.t(n), grid.x(i), a.y, a.z0, a.z1}, w * a.weight);
    }
  for (MeasureId b : {MeasureId::initial, MeasureId::terminal, MeasureId::left, MeasureId::right}) {
    const BoundaryTrace& trace = lift.trace(boundary_part(b));
    const MeasureLayout& layout = rp.measure(b);
    for (std::size_t k = 0; k < trace.cells.size(); ++k)
      for (const Atom& a : trace.cells[k].atoms())
        deposit(layout, {trace.t[k], trace.x[k], a.y, a.z0, a.z1}, trace.weight[k] * a.weight);
  }
  return out;
}

void write_sdpa(std::ostream& os, const RelaxationProblem& rp) {
  const double sign = rp.sense == Sense::max ? -1.0 : 1.0;
  const int m = static_cast<int>(rp.rows.size());
  os << fmt::format("* moment relaxation, degree {}, sense {} (exported as min)\n", rp.degree, sense_name(rp.sense));
  os << fmt::format("* variables: {} moments; blocks 1..{} PSD, block {} diagonal equality pairs\n", rp.num_moments,
                    rp.blocks.size(), rp.blocks.size() + 1);
  os << rp.num_moments << '\n' << rp.blocks.size() + 1 << '\n';
  for (const PsdBlock& b : rp.blocks) os << b.dim << ' ';
  os << -2 * m << '\n';
  for (int k = 0; k < rp.num_moments; ++k) os << fmt::format("{}{:.17g}", k == 0 ? "" : " ", sign * rp.cost(k));
  os << '\n';

  // Entries sorted by (matrix, block, i, j) so the file is canonical.
  struct Entry {
    int mat, blk, i, j;
    double v;
  };
  std::vector<Entry> entries;
  for (std::size_t b = 0; b < rp.blocks.size(); ++b) {
    const PsdBlock& block = rp.blocks[b];
    for (int j = 0; j < block.dim; ++j)
      for (int i = 0; i <= j; ++i)
        for (const auto& [k, c] : block.entries[static_cast<std::size_t>(PsdBlock::packed(i, j))])
          entries.push_back({k + 1, static_cast<int>(b) + 1, i + 1, j + 1, c});
  }
  const int eq_block = static_cast<int>(rp.blocks.size()) + 1;
  for (int r = 0; r < m; ++r) {
    const EqualityRow& row = rp.rows[static_cast<std::size_t>(r)];
    if (row.rhs != 0.0) {
      entries.push_back({0, eq_block, 2 * r + 1, 2 * r + 1, row.rhs});
      entries.push_back({0, eq_block, 2 * r + 2, 2 * r + 2, -row.rhs});
    }
    for (const auto& [k, c] : row.terms) {
      entries.push_back({k + 1, eq_block, 2 * r + 1, 2 * r + 1, c});
      entries.push_back({k + 1, eq_block, 2 * r + 2, 2 * r + 2, -c});
    }
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.mat, a.blk, a.i, a.j) < std::tie(b.mat, b.blk, b.i, b.j);
  });
  for (const Entry& e : entries) os << fmt::format("{} {} {} {} {:.17g}\n", e.mat, e.blk, e.i, e.j, e.v);
}

}  // namespace mvrelax
