#pragma once

#include <Eigen/Dense>

namespace mvrelax {

// Node-based data on the space-time grid: row n is time t_n, column i is
// space node x_i (columns 0 and Nx+1 are the Dirichlet boundary).
using GridArray = Eigen::ArrayXXd;

// Uniform grid on [0,T] x [0,1] with Nt time steps and Nx interior space
// nodes, so dt = T/Nt and dx = 1/(Nx+1).
class SpaceTimeGrid {
 public:
  SpaceTimeGrid(double T, int nt, int nx);

  [[nodiscard]] double horizon() const { return T_; }
  [[nodiscard]] int nt() const { return nt_; }
  [[nodiscard]] int nx() const { return nx_; }
  [[nodiscard]] int time_points() const { return nt_ + 1; }
  [[nodiscard]] int space_points() const { return nx_ + 2; }
  [[nodiscard]] double dt() const { return T_ / nt_; }
  [[nodiscard]] double dx() const { return 1.0 / (nx_ + 1); }
  [[nodiscard]] double t(int n) const { return n == nt_ ? T_ : n * dt(); }
  [[nodiscard]] double x(int i) const { return i == nx_ + 1 ? 1.0 : i * dx(); }
  [[nodiscard]] bool is_boundary_node(int i) const { return i == 0 || i == nx_ + 1; }

  [[nodiscard]] GridArray zeros() const { return GridArray::Zero(time_points(), space_points()); }
  [[nodiscard]] bool same_shape(const GridArray& a) const {
    return a.rows() == time_points() && a.cols() == space_points();
  }

  // Composite trapezoid weights along each axis.
  [[nodiscard]] double time_weight(int n) const {
    return (n == 0 || n == nt_) ? 0.5 * dt() : dt();
  }
  [[nodiscard]] double space_weight(int i) const {
    return (i == 0 || i == nx_ + 1) ? 0.5 * dx() : dx();
  }

  // Tensor trapezoid rule over Q_T. Summation order is fixed (time-major) so
  // results are reproducible bit for bit.
  [[nodiscard]] double integrate(const GridArray& values) const;
  // Trapezoid over [0,1] of one time row.
  [[nodiscard]] double integrate_space(const GridArray& values, int n) const;
  // Trapezoid over [0,T] of one space column.
  [[nodiscard]] double integrate_time(const GridArray& values, int i) const;

  friend bool operator==(const SpaceTimeGrid& a, const SpaceTimeGrid& b) {
    return a.T_ == b.T_ && a.nt_ == b.nt_ && a.nx_ == b.nx_;
  }

 private:
  double T_;
  int nt_;
  int nx_;
};

// Throws GridMismatch unless the two grids are identical.
void require_same_grid(const SpaceTimeGrid& a, const SpaceTimeGrid& b, const char* where);

}  // namespace mvrelax
