#include "mvrelax/grid.hpp"

#include <fmt/format.h>

#include "mvrelax/error.hpp"

namespace mvrelax {

SpaceTimeGrid::SpaceTimeGrid(double T, int nt, int nx) : T_(T), nt_(nt), nx_(nx) {
  if (!(T > 0.0)) throw InvalidInput("bad-grid", "time horizon must be positive");
  if (nt < 2 || nx < 2)
    throw InvalidInput("bad-grid", fmt::format("grid {}x{} too small (need Nt >= 2, Nx >= 2)", nt, nx));
}

double SpaceTimeGrid::integrate(const GridArray& values) const {
  double sum = 0.0;
  for (int n = 0; n < time_points(); ++n) sum += time_weight(n) * integrate_space(values, n);
  return sum;
}

double SpaceTimeGrid::integrate_space(const GridArray& values, int n) const {
  double row = 0.0;
  for (int i = 0; i < space_points(); ++i) row += space_weight(i) * values(n, i);
  return row;
}

double SpaceTimeGrid::integrate_time(const GridArray& values, int i) const {
  double col = 0.0;
  for (int n = 0; n < time_points(); ++n) col += time_weight(n) * values(n, i);
  return col;
}

void require_same_grid(const SpaceTimeGrid& a, const SpaceTimeGrid& b, const char* where) {
  if (!(a == b))
    throw GridMismatch(fmt::format("{}: grids differ ({}x{} on T={} vs {}x{} on T={})", where,
                                   a.nt(), a.nx(), a.horizon(), b.nt(), b.nx(), b.horizon()));
}

}  // namespace mvrelax
