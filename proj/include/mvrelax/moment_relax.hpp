#pragma once

#include <array>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "mvrelax/occupation.hpp"
#include "mvrelax/polynomial.hpp"
#include "mvrelax/problem.hpp"

namespace mvrelax {

struct MonomialIndex {
  Exponents exponents{};

  [[nodiscard]] int degree() const { return total_degree(exponents); }
};

// Every monomial in `vars` of total degree <= max_degree, in graded
// lexicographic order.
[[nodiscard]] std::vector<MonomialIndex> enumerate_monomials(std::span<const Var> vars, int max_degree);

// The interior measure lives on (t,x,y,z0,z1); the boundary measures drop z0
// and pin the coordinate that is constant on their piece.
enum class MeasureId { interior, initial, terminal, left, right };

inline constexpr std::array<MeasureId, 5> kMeasureIds{MeasureId::interior, MeasureId::initial, MeasureId::terminal,
                                                      MeasureId::left, MeasureId::right};

[[nodiscard]] std::string_view measure_name(MeasureId m);

struct MeasureLayout {
  MeasureId id = MeasureId::interior;
  std::vector<Var> vars;
  std::optional<std::pair<Var, double>> pinned;
  // y on this piece as a polynomial of the free coordinates, when the data
  // fixes it; y is then not a coordinate of the measure.
  std::optional<Polynomial> state;
  // Coordinate whose marginal is known exactly (Lebesgue on marginal_range).
  std::optional<Var> marginal;
  Interval marginal_range;
  double mass = 0.0;  // sigma-measure of the support piece
  int offset = 0;     // global index of the first moment
  std::vector<MonomialIndex> monomials;  // degree <= 2d
  std::map<Exponents, int, GradedLexLess> index;

  [[nodiscard]] int size() const { return static_cast<int>(monomials.size()); }
  [[nodiscard]] bool has(const Exponents& e) const { return index.contains(e); }
  // Global moment index of e. Throws InvalidInput("unknown-moment").
  [[nodiscard]] int variable(const Exponents& e) const;
};

// Per-coordinate affine map u = shift + scale * s between problem
// coordinates u and solver coordinates s. Moments are stored in s.
struct AffineMap {
  std::array<double, kNumVars> shift{};
  std::array<double, kNumVars> scale{1.0, 1.0, 1.0, 1.0, 1.0};

  // p(u) rewritten as a polynomial in s.
  [[nodiscard]] Polynomial to_solver(const Polynomial& p) const;
  // s_v as a polynomial in u.
  [[nodiscard]] Polynomial solver_coordinate(Var v) const;
};

enum class RowFamily {
  ibp_time,
  ibp_space,
  weak,
  dissipation,
  initial,
  lateral,
  normalization,
  interior_marginal,
  custom
};

inline constexpr std::array<RowFamily, 9> kRowFamilies{
    RowFamily::ibp_time, RowFamily::ibp_space,     RowFamily::weak,
    RowFamily::dissipation, RowFamily::initial,    RowFamily::lateral,
    RowFamily::normalization, RowFamily::interior_marginal, RowFamily::custom};

[[nodiscard]] std::string_view row_family_name(RowFamily f);

using SparseTerms = std::vector<std::pair<int, double>>;

// constant + sum_k terms_k moment_k.
struct LinearForm {
  SparseTerms terms;
  double constant = 0.0;
};

struct EqualityRow {
  RowFamily family = RowFamily::custom;
  std::string label;
  SparseTerms terms;  // sorted by moment index, no duplicates
  double rhs = 0.0;
};

// A row whose integrand needs moments beyond degree 2d.
struct SkippedRow {
  RowFamily family = RowFamily::custom;
  std::string label;
  int degree = 0;
};

// Symmetric matrix, linear in the moments, constrained PSD. Entry (i, j) with
// i <= j is stored at packed position j (j + 1) / 2 + i.
struct PsdBlock {
  std::string name;
  MeasureId measure = MeasureId::interior;
  int dim = 0;
  std::vector<SparseTerms> entries;

  [[nodiscard]] static int packed(int i, int j) { return j * (j + 1) / 2 + i; }
  [[nodiscard]] Eigen::MatrixXd evaluate(const Eigen::VectorXd& moments) const;
};

enum class Sense { min, max };

[[nodiscard]] std::string_view sense_name(Sense s);

// Row basis of the moment and localizing matrices.
enum class MomentBasis { monomial, legendre };

struct AssembleOptions {
  // Map every coordinate box onto [-1, 1] before assembly.
  bool rescale = true;
  // false drops the weak rows with y-dependent test functions and the
  // dissipation rows (the second-order information).
  bool second_order_rows = true;
  // Legendre rows give congruent, better conditioned matrices.
  MomentBasis basis = MomentBasis::legendre;
};

struct RelaxationProblem {
  int degree = 0;
  double T = 1.0;
  Sense sense = Sense::min;
  Polynomial objective;  // integrated against the interior measure
  AssembleOptions options;
  AffineMap map;
  AffineMap box;  // maps [-1, 1] onto the coordinate boxes
  std::vector<MeasureLayout> measures;  // ordered like kMeasureIds
  int num_moments = 0;
  std::vector<EqualityRow> rows;
  std::vector<PsdBlock> blocks;
  Eigen::VectorXd cost;  // objective = cost . moments
  std::vector<SkippedRow> skipped;

  [[nodiscard]] const MeasureLayout& measure(MeasureId m) const { return measures[static_cast<std::size_t>(m)]; }
  [[nodiscard]] int count(RowFamily f) const;

  // Linear form p -> int p dmu_m, p in problem coordinates. Throws
  // InvalidInput("unknown-moment") if p needs a moment outside the layout.
  [[nodiscard]] LinearForm functional(MeasureId m, const Polynomial& p) const;
  [[nodiscard]] double integrate(MeasureId m, const Polynomial& p, const Eigen::VectorXd& moments) const;

  // Appends sum_k terms_k = rhs over global moment indices.
  void add_row(RowFamily family, std::string label, SparseTerms terms, double rhs);
};

// Builds the degree-d relaxation. Error codes:
//   "degree-too-low"        2d < max(deg f, deg y0, deg objective)
//   "bad-objective"         objective degree above 2d
// Integrands with degree above 2d are skipped and listed in `skipped`.
[[nodiscard]] RelaxationProblem assemble(const PdeProblem& problem, int d, const Polynomial& objective, Sense sense,
                                         const AssembleOptions& opts = {});

// Trapezoid moments of an occupation lift in the layout of rp.
[[nodiscard]] Eigen::VectorXd lift_moments(const RelaxationProblem& rp, const OccupationLift& lift);

// SDPA sparse format. Variables are the moments; block 1..B are the PSD
// blocks in order, the last block is diagonal with 2m entries holding
// a_k.x - b_k >= 0 and b_k - a_k.x >= 0 for the m equality rows. A max
// problem is exported as min of the negated cost.
void write_sdpa(std::ostream& os, const RelaxationProblem& rp);

}  // namespace mvrelax
