#include "mvrelax/io.hpp"

#include <fmt/format.h>

#include "mvrelax/hash.hpp"

namespace mvrelax {

namespace {

std::string_view part_name(BoundaryPart p) {
  switch (p) {
    case BoundaryPart::initial:
      return "initial";
    case BoundaryPart::terminal:
      return "terminal";
    case BoundaryPart::left:
      return "left";
    case BoundaryPart::right:
      return "right";
  }
  return "unknown";
}

}  // namespace

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

Json to_json(const SpaceTimeGrid& g) {
  return {{"T", g.horizon()}, {"nt", g.nt()}, {"nx", g.nx()}, {"dt", g.dt()}, {"dx", g.dx()}};
}

Json to_json(const ResidualReport& r) {
  Json entries = Json::array();
  for (const ResidualEntry& e : r.entries) entries.push_back({{"index", e.index}, {"value", e.value}});
  return {{"family", r.name()},
          {"basis_dims", r.basis_dims},
          {"entries", std::move(entries)},
          {"max", r.max},
          {"l2", r.l2},
          {"grid", {{"T", r.grid.T}, {"nt", r.grid.nt}, {"nx", r.grid.nx}}},
          {"tolerances", {{"residual", r.tolerance}}},
          {"pass", r.passes()}};
}

Json to_json(const PdeProblem& p) {
  return {{"T", p.T},
          {"f", p.f.to_string()},
          {"y0", p.y0.to_string()},
          {"ybox", {p.ybox.lo, p.ybox.hi}},
          {"zbox", {p.zbox.z0_max, p.zbox.z1_max}},
          {"lipschitz", p.lipschitz},
          {"r_exponent", p.r_exponent},
          {"hash", hex_digest(problem_hash(p))}};
}

Json to_json(const BoundEntry& e) {
  return {{"objective_id", e.objective_id},
          {"d", e.degree},
          {"sense", sense_name(e.sense)},
          {"value", e.value},
          {"gap", e.gap},
          {"reference", e.reference},
          {"status", conic_status_name(e.status)},
          {"iterations", e.iterations},
          {"equality_residual", e.equality_residual},
          {"psd_residual", e.psd_residual}};
}

Json to_json(const FirstMomentReport& r) {
  Json moments = Json::array();
  for (const FirstMoment& m : r.moments)
    moments.push_back(
        {{"a", m.a}, {"b", m.b}, {"value", m.value}, {"reference", m.reference}, {"discrepancy", m.discrepancy}});
  return {{"status", conic_status_name(r.status)}, {"max_discrepancy", r.max_discrepancy}, {"moments", moments}};
}

Json solution_header(const FieldSolution& sol, const PdeProblem& problem) {
  return {{"problem", to_json(problem)},
          {"grid", to_json(sol.grid)},
          {"scheme", scheme_name(sol.scheme)},
          {"range_escape", sol.range_escape},
          {"observed_range", {sol.observed_range.lo, sol.observed_range.hi}},
          {"newton_iterations", sol.newton_iterations}};
}

void write_solution_csv(std::ostream& os, const FieldSolution& sol, const std::string& tag) {
  os << "# " << tag << '\n' << "n,i,t,x,y,dty,dxy\n";
  const SpaceTimeGrid& g = sol.grid;
  for (int n = 0; n < g.time_points(); ++n)
    for (int i = 0; i < g.space_points(); ++i)
      os << fmt::format("{},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", n, i, g.t(n), g.x(i), sol.y(n, i),
                        sol.dty(n, i), sol.dxy(n, i));
}

void write_young_field_csv(std::ostream& os, const YoungField& field, const std::string& tag) {
  os << "# " << tag << '\n' << "n,i,t,x,atom,weight,y,z0,z1\n";
  const SpaceTimeGrid& g = field.grid();
  for (int n = 0; n < g.time_points(); ++n)
    for (int i = 0; i < g.space_points(); ++i) {
      const auto& atoms = field.cell(n, i).atoms();
      for (std::size_t k = 0; k < atoms.size(); ++k)
        os << fmt::format("{},{},{:.17g},{:.17g},{},{:.17g},{:.17g},{:.17g},{:.17g}\n", n, i, g.t(n), g.x(i), k,
                          atoms[k].weight, atoms[k].y, atoms[k].z0, atoms[k].z1);
    }
}

void write_boundary_csv(std::ostream& os, const OccupationLift& lift, const std::string& tag) {
  os << "# " << tag << '\n' << "part,k,t,x,sigma_weight,atom,weight,y,z0,z1\n";
  for (BoundaryPart p : kBoundaryParts) {
    const BoundaryTrace& tr = lift.trace(p);
    for (std::size_t k = 0; k < tr.cells.size(); ++k) {
      const auto& atoms = tr.cells[k].atoms();
      for (std::size_t a = 0; a < atoms.size(); ++a)
        os << fmt::format("{},{},{:.17g},{:.17g},{:.17g},{},{:.17g},{:.17g},{:.17g},{:.17g}\n", part_name(p), k,
                          tr.t[k], tr.x[k], tr.weight[k], a, atoms[a].weight, atoms[a].y, atoms[a].z0, atoms[a].z1);
    }
  }
}

}  // namespace mvrelax
