#include "mvrelax/residual_report.hpp"

#include <algorithm>
#include <cmath>

namespace mvrelax {

std::string_view family_name(ResidualFamily f) {
  switch (f) {
    case ResidualFamily::ibp_time: return "ibp-time";
    case ResidualFamily::ibp_space: return "ibp-space";
    case ResidualFamily::m1_weak: return "m1-weak";
    case ResidualFamily::m1_ic: return "m1-ic";
    case ResidualFamily::m1_bc: return "m1-bc";
    case ResidualFamily::m2_weak: return "m2-weak";
    case ResidualFamily::m2_ic: return "m2-ic";
    case ResidualFamily::m2_bc: return "m2-bc";
    case ResidualFamily::dissipation: return "dissipation";
    case ResidualFamily::certificate: return "certificate";
    case ResidualFamily::occupation_ibp_time: return "occupation-ibp-time";
    case ResidualFamily::occupation_ibp_space: return "occupation-ibp-space";
    case ResidualFamily::occupation_weak: return "occupation-weak";
    case ResidualFamily::occupation_dissipation: return "occupation-dissipation";
    case ResidualFamily::occupation_ic: return "occupation-ic";
    case ResidualFamily::occupation_bc: return "occupation-bc";
    case ResidualFamily::occupation_normalization: return "occupation-normalization";
  }
  return "unknown";
}

ResidualReport::ResidualReport(ResidualFamily family, std::vector<int> basis_dims, const SpaceTimeGrid& g,
                               double tolerance)
    : family(family), basis_dims(std::move(basis_dims)), grid{g.horizon(), g.nt(), g.nx()}, tolerance(tolerance) {}

void ResidualReport::add(std::vector<int> index, double value) {
  entries.push_back({std::move(index), value});
  // A NaN entry poisons the norms so that passes() fails.
  max = (std::isnan(value) || std::isnan(max)) ? std::nan("") : std::max(max, std::abs(value));
  sum_sq_ += value * value;
  l2 = std::sqrt(sum_sq_);
}

}  // namespace mvrelax
