#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "mvrelax/bounds.hpp"
#include "mvrelax/occupation.hpp"
#include "mvrelax/pde_solver.hpp"
#include "mvrelax/residual_report.hpp"
#include "mvrelax/young_measure.hpp"

namespace mvrelax {

using Json = nlohmann::ordered_json;

// Writers used for artifacts. Reals are printed with 17 significant digits
// so files round-trip and are byte-stable across runs.

// {family, basis_dims, entries: [{index, value}], max, l2, grid, tolerances}.
[[nodiscard]] Json to_json(const ResidualReport& r);
[[nodiscard]] Json to_json(const PdeProblem& p);
[[nodiscard]] Json to_json(const SpaceTimeGrid& g);
[[nodiscard]] Json to_json(const BoundEntry& e);
[[nodiscard]] Json to_json(const FirstMomentReport& r);

// Header of a solve: problem, grid, scheme, range flag, observed range and
// Newton work.
[[nodiscard]] Json solution_header(const FieldSolution& sol, const PdeProblem& problem);

// Every line starting with '#' is a comment carrying `tag`.
// n,i,t,x,y,dty,dxy
void write_solution_csv(std::ostream& os, const FieldSolution& sol, const std::string& tag);
// n,i,t,x,atom,weight,y,z0,z1
void write_young_field_csv(std::ostream& os, const YoungField& field, const std::string& tag);
// part,k,t,x,sigma_weight,atom,weight,y,z0,z1
void write_boundary_csv(std::ostream& os, const OccupationLift& lift, const std::string& tag);

[[nodiscard]] std::string format_real(double v);

}  // namespace mvrelax
