#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mvrelax/grid.hpp"

namespace mvrelax {

enum class ResidualFamily {
  ibp_time,
  ibp_space,
  m1_weak,
  m1_ic,
  m1_bc,
  m2_weak,
  m2_ic,
  m2_bc,
  dissipation,
  certificate,
  occupation_ibp_time,
  occupation_ibp_space,
  occupation_weak,
  occupation_dissipation,
  occupation_ic,
  occupation_bc,
  occupation_normalization,
};

[[nodiscard]] std::string_view family_name(ResidualFamily f);

struct ResidualEntry {
  std::vector<int> index;  // basis indices, outermost first
  double value = 0.0;
};

struct GridInfo {
  double T = 0.0;
  int nt = 0;
  int nx = 0;
};

// Named residual values for one constraint family. `max` and `l2` are kept
// in sync with `entries` by add().
struct ResidualReport {
  ResidualFamily family = ResidualFamily::m1_weak;
  std::vector<int> basis_dims;
  std::vector<ResidualEntry> entries;
  double max = 0.0;  // max |value|
  double l2 = 0.0;   // sqrt(sum value^2)
  GridInfo grid;
  double tolerance = 0.0;

  ResidualReport(ResidualFamily family, std::vector<int> basis_dims, const SpaceTimeGrid& g, double tolerance);

  void add(std::vector<int> index, double value);
  [[nodiscard]] bool passes() const { return max <= tolerance; }
  [[nodiscard]] std::string_view name() const { return family_name(family); }

 private:
  double sum_sq_ = 0.0;
};

}  // namespace mvrelax
