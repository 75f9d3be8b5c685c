#pragma once

#include <vector>

#include "mvrelax/grid.hpp"
#include "mvrelax/pde_solver.hpp"
#include "mvrelax/polynomial.hpp"
#include "mvrelax/problem.hpp"

namespace mvrelax {

struct Atom {
  double y = 0.0;
  double z0 = 0.0;  // time-derivative coordinate
  double z1 = 0.0;  // space-derivative coordinate
  double weight = 1.0;
};

// Finitely supported probability measure on Y x Z.
class CellMeasure {
 public:
  CellMeasure() = default;
  // Throws InvalidInput("bad-measure") unless every weight is in (0,1] and the
  // weights sum to one within kWeightTolerance.
  explicit CellMeasure(std::vector<Atom> atoms);

  static CellMeasure dirac(double y, double z0, double z1) { return CellMeasure({{y, z0, z1, 1.0}}); }

  [[nodiscard]] const std::vector<Atom>& atoms() const { return atoms_; }

  // <mu, g(atom)>, accumulated in atom order.
  template <typename G>
  [[nodiscard]] double expect(G&& g) const {
    double acc = 0.0;
    for (const Atom& a : atoms_) acc += a.weight * g(a);
    return acc;
  }

  static constexpr double kWeightTolerance = 1e-12;

 private:
  std::vector<Atom> atoms_;
};

// A cell measure per grid node, stored time-major.
class YoungField {
 public:
  YoungField(SpaceTimeGrid grid, std::vector<CellMeasure> cells);

  [[nodiscard]] const SpaceTimeGrid& grid() const { return grid_; }
  [[nodiscard]] const CellMeasure& cell(int n, int i) const {
    return cells_[static_cast<std::size_t>(n * grid_.space_points() + i)];
  }
  void set_cell(int n, int i, CellMeasure m) {
    cells_[static_cast<std::size_t>(n * grid_.space_points() + i)] = std::move(m);
  }

  // Grid array of <mu_(t,x), g(t, x, atom)>.
  template <typename G>
  [[nodiscard]] GridArray expect(G&& g) const {
    GridArray out = grid_.zeros();
    for (int n = 0; n < grid_.time_points(); ++n) {
      const double t = grid_.t(n);
      for (int i = 0; i < grid_.space_points(); ++i) {
        const double x = grid_.x(i);
        out(n, i) = cell(n, i).expect([&](const Atom& a) { return g(t, x, a); });
      }
    }
    return out;
  }

  // Number of atoms outside ybox x zbox. Violations are soft: stress fields
  // are allowed to leave the box.
  [[nodiscard]] int count_box_violations(const Interval& ybox, const DerivativeBox& zbox) const;

 private:
  SpaceTimeGrid grid_;
  std::vector<CellMeasure> cells_;
};

struct MomentFields {
  GridArray m1;       // <y>
  GridArray m2;       // <y^2>
  GridArray mf;       // <f>
  GridArray mfhat;    // 2<y f> - 2<z1^2>
  GridArray mz0;      // <z0>
  GridArray mz0sq;    // <z0^2>
  GridArray mzbarsq;  // <z1^2>
};

// One atom (y, dty, dxy) of weight one per node.
[[nodiscard]] YoungField lift_dirac(const FieldSolution& sol);

// <mu_(t,x), g(t, x, y, z0, z1)> per node; exact in the measure variables.
[[nodiscard]] GridArray pair(const YoungField& field, const Polynomial& g);

[[nodiscard]] MomentFields moments(const YoungField& field, const PdeProblem& problem);

// w = <mu, (y - y_ref)^2> summed atom by atom. Throws GridMismatch.
[[nodiscard]] GridArray squared_error_density(const YoungField& field, const FieldSolution& ref);
// Same quantity as m2 - 2 y_ref m1 + y_ref^2.
[[nodiscard]] GridArray squared_error_density_expanded(const YoungField& field, const FieldSolution& ref);

// w_hat(t,x) = exp(-2 t L_Y) w(t,x).
[[nodiscard]] GridArray weighted_error_density(const GridArray& w, const SpaceTimeGrid& grid, double lipschitz);

// g(t,x) = A t^2 (T-t)^2 x^2 (1-x)^2. Its maximum A (T/2)^4 / 16 is attained
// at (T/2, 1/2).
struct BumpSpec {
  double T = 0.5;
  double amplitude = 1.0;

  // Amplitude giving max g = peak.
  static BumpSpec with_peak(double T, double peak = 1.0);

  [[nodiscard]] double peak() const;
  [[nodiscard]] double value(double t, double x) const;
  [[nodiscard]] double dt(double t, double x) const;
  [[nodiscard]] double dx(double t, double x) const;
  [[nodiscard]] Polynomial polynomial() const;
};

// Two atoms of weight 1/2 at +-(g, dt g, dx g), derivatives in closed form.
[[nodiscard]] YoungField counterexample_field(const SpaceTimeGrid& grid, const BumpSpec& bump);

struct ConcentrationReport {
  double sup_w = 0.0;         // sup <(y - y*)^2>
  double sup_zbar_var = 0.0;  // sup <(z1 - dx y*)^2>
  double sup_z0_var = 0.0;    // sup <(z0 - dt y*)^2>
};

[[nodiscard]] ConcentrationReport marginal_concentration_report(const YoungField& field,
                                                                const FieldSolution& ref);

}  // namespace mvrelax
