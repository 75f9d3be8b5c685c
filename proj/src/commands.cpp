#include "mvrelax/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <fmt/format.h>

#include "mvrelax/bounds.hpp"
#include "mvrelax/error.hpp"

namespace mvrelax {

namespace fs = std::filesystem;

namespace {

fs::path output_dir(const RunConfig& cfg) {
  fs::path dir(cfg.output);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("io-error", fmt::format("cannot write '{}'", path.string()));
  os << text;
  if (!os) throw Error("io-error", fmt::format("failed writing '{}'", path.string()));
}

void write_json(const fs::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

template <typename Writer>
void write_csv(const fs::path& path, Writer&& writer) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("io-error", fmt::format("cannot write '{}'", path.string()));
  writer(os);
  if (!os) throw Error("io-error", fmt::format("failed writing '{}'", path.string()));
}

// The output directory is left out so artifacts do not depend on where they live.
Json envelope(const std::string& command, const RunConfig& cfg) {
  Json config = to_json(cfg);
  config.erase("output");
  return {{"command", command}, {"config_hash", config_hash(cfg)}, {"config", config}};
}

bool runs(Suite selected, Suite s) { return selected == Suite::all || selected == s; }

std::vector<double> sine_samples(const SpaceTimeGrid& g) {
  std::vector<double> v(static_cast<std::size_t>(g.space_points()), 0.0);
  for (int i = 1; i <= g.nx(); ++i) v[static_cast<std::size_t>(i)] = std::sin(std::numbers::pi * g.x(i));
  return v;
}

std::string verdict_line(const FamilyVerdict& v) {
  return fmt::format("{:<26} {} max={:.3e} tol={:.3e}", v.family, v.pass ? "PASS" : "FAIL", v.max, v.tolerance);
}

Json order_json(const std::optional<double>& order) {
  if (!order) return "exact";
  return *order;
}

std::string order_cell(const std::optional<double>& order) { return order ? format_real(*order) : "exact"; }

// Refinement ratio between consecutive grids; all ratios must agree in t and x.
int refinement_ratio(const GridSpec& coarse, const GridSpec& fine) {
  const int r = fine.nt / coarse.nt;
  if (r < 2 || fine.nt != r * coarse.nt || fine.nx + 1 != r * (coarse.nx + 1))
    throw InvalidInput("grids-not-nested", fmt::format("grid {} does not refine {} by a common integer ratio",
                                                       grid_text(fine), grid_text(coarse)));
  return r;
}

double nested_difference(const FieldSolution& coarse, const FieldSolution& fine, int r) {
  double d = 0.0;
  for (int n = 0; n < coarse.grid.time_points(); ++n)
    for (int i = 0; i < coarse.grid.space_points(); ++i) d = std::max(d, std::abs(coarse.y(n, i) - fine.y(n * r, i * r)));
  return d;
}

}  // namespace

std::optional<double> observed_order(double coarse, double fine, double ratio) {
  if (coarse == 0.0 && fine == 0.0) return std::nullopt;
  return std::log(coarse / fine) / std::log(ratio);
}

PreparedRun prepare_run(const RunConfig& cfg, const GridSpec& grid) {
  PdeProblem problem = make_problem(cfg.problem);
  const SpaceTimeGrid g(problem.T, grid.nt, grid.nx);
  std::vector<double> initial;
  if (cfg.initial_data == InitialData::sine) initial = sine_samples(g);
  FieldSolution sol = initial.empty() ? solve(problem, g, cfg.solve) : solve(problem, g, initial, cfg.solve);
  return {std::move(problem), g, std::move(initial), std::move(sol)};
}

YoungField configured_field(const RunConfig& cfg, const PreparedRun& run) {
  if (cfg.field == FieldKind::counterexample)
    return counterexample_field(run.grid, BumpSpec::with_peak(run.problem.T));
  return lift_dirac(run.solution);
}

VerifyOutcome verify_field(const RunConfig& cfg, const PreparedRun& run, const YoungField& field) {
  VerifyOutcome out;
  const double tol = tol_residual(run.grid, cfg.residual_constant);
  const double tol_occ = tol_residual(run.grid, cfg.occupation_constant);
  const VerifierBases bases = default_bases(run.problem.T, cfg.basis_time, cfg.basis_space, cfg.basis_state_degree,
                                            cfg.time_kind, cfg.space_kind);
  const auto append = [&](std::vector<ResidualReport> reports) {
    for (ResidualReport& r : reports) out.reports.push_back(std::move(r));
  };
  if (runs(cfg.suite, Suite::mv))
    append(mv_residual_suite(field, run.problem, bases.time, bases.space, tol, run.initial));
  if (runs(cfg.suite, Suite::emv))
    append(emv_residual_suite(field, run.problem, bases.time, bases.space, tol, run.initial));
  if (runs(cfg.suite, Suite::ibp)) append(ibp_residual_suite(field, bases, tol));
  const OccupationLift lift = lift_occupation(field, run.solution);
  out.masses = occupation_masses(lift);
  if (runs(cfg.suite, Suite::occupation)) {
    append(marginal_residuals(lift, run.problem, cfg.occupation_degree, tol_occ, run.initial));
    append(occupation_identity_suite(lift, run.problem, cfg.occupation_degree, tol_occ));
  }
  for (const ResidualReport& r : out.reports)
    out.verdicts.push_back({std::string(r.name()), r.max, r.tolerance, r.passes()});
  if (runs(cfg.suite, Suite::certificate)) {
    CertificateOptions co;
    co.scheme = cfg.solve.scheme;
    co.certificate_tol = cfg.certificate_tol;
    out.certificate = dual_heat_certificate(field, run.solution, run.problem,
                                            BumpSpec::with_peak(run.problem.T).polynomial(), co);
    out.verdicts.push_back({"certificate", out.certificate->integral, cfg.certificate_tol,
                            out.certificate->emv_consistent && out.certificate->max_principle_ok});
  }
  out.concentration = marginal_concentration_report(field, run.solution);
  return out;
}

std::string artifact_tag(const std::string& command, const RunConfig& cfg) {
  return fmt::format("mvrelax {} config_hash={}", command, config_hash(cfg));
}

int run_solve(const RunConfig& cfg, std::ostream& out) {
  const PreparedRun run = prepare_run(cfg, cfg.grid);
  const fs::path dir = output_dir(cfg);
  write_csv(dir / "solution.csv", [&](std::ostream& os) { write_solution_csv(os, run.solution, artifact_tag("solve", cfg)); });
  Json j = envelope("solve", cfg);
  j["solution"] = solution_header(run.solution, run.problem);
  write_json(dir / "solution.json", j);
  out << fmt::format("solve {} grid={} range=[{:.6g}, {:.6g}] range_escape={} newton_iterations={}\n",
                     scheme_name(run.solution.scheme), grid_text(cfg.grid), run.solution.observed_range.lo,
                     run.solution.observed_range.hi, run.solution.range_escape, run.solution.newton_iterations);
  return kExitOk;
}

int run_verify(const RunConfig& cfg, std::ostream& out) {
  const PreparedRun run = prepare_run(cfg, cfg.grid);
  const YoungField field = configured_field(cfg, run);
  const VerifyOutcome v = verify_field(cfg, run, field);
  const fs::path dir = output_dir(cfg);
  fs::create_directories(dir / "residuals");
  const std::string hash = config_hash(cfg);
  for (const ResidualReport& r : v.reports) {
    Json j = to_json(r);
    j["config_hash"] = hash;
    write_json(dir / "residuals" / (std::string(r.name()) + ".json"), j);
  }
  const OccupationLift lift = lift_occupation(field, run.solution);
  write_csv(dir / "young_field.csv", [&](std::ostream& os) { write_young_field_csv(os, field, artifact_tag("verify", cfg)); });
  write_csv(dir / "boundary.csv", [&](std::ostream& os) { write_boundary_csv(os, lift, artifact_tag("verify", cfg)); });

  bool pass = true;
  Json families = Json::array();
  for (const FamilyVerdict& f : v.verdicts) {
    pass = pass && f.pass;
    families.push_back({{"family", f.family}, {"max", f.max}, {"tolerance", f.tolerance}, {"pass", f.pass}});
    out << verdict_line(f) << '\n';
  }
  Json j = envelope("verify", cfg);
  j["grid"] = to_json(run.grid);
  j["families"] = families;
  j["concentration"] = {{"sup_w", v.concentration.sup_w},
                        {"sup_zbar_var", v.concentration.sup_zbar_var},
                        {"sup_z0_var", v.concentration.sup_z0_var}};
  j["masses"] = {{"interior", v.masses.interior},
                 {"initial", v.masses.initial},
                 {"terminal", v.masses.terminal},
                 {"lateral", v.masses.lateral}};
  j["certificate"] = nullptr;
  if (v.certificate)
    j["certificate"] = {{"integral", v.certificate->integral},
                        {"min_phi_g", v.certificate->min_phi_g},
                        {"max_principle_ok", v.certificate->max_principle_ok},
                        {"emv_consistent", v.certificate->emv_consistent}};
  j["pass"] = pass;
  write_json(dir / "verify.json", j);
  out << (pass ? "verify PASS\n" : "verify FAIL\n");
  return pass ? kExitOk : kExitNumerical;
}

int run_relax(const RunConfig& cfg, std::ostream& out) {
  if (cfg.initial_data != InitialData::polynomial)
    throw InvalidInput("relax-needs-polynomial-data", "relaxations need polynomial initial data");
  const PreparedRun run = prepare_run(cfg, cfg.grid);
  const PdeProblem problem =
      cfg.fit_boxes ? fit_relaxation_boxes(run.problem, run.solution, cfg.box_inflation) : run.problem;
  std::vector<NamedObjective> objectives;
  for (const auto& [id, text] : cfg.objectives) objectives.push_back({id, Polynomial::parse(text)});
  BoundsOptions bo;
  bo.assemble = cfg.assemble;
  bo.solver = cfg.solver_options();
  bo.max_iters = cfg.max_iters_by_degree;
  const BoundsTable table = bounds_report(problem, run.solution, objectives, cfg.degrees, bo);

  const fs::path dir = output_dir(cfg);
  write_csv(dir / "bounds.csv", [&](std::ostream& os) {
    os << "# " << artifact_tag("relax", cfg) << '\n';
    write_bounds_csv(os, table);
  });
  bool infeasible = false;
  Json entries = Json::array();
  for (const BoundEntry& e : table.entries) {
    infeasible = infeasible || e.status == ConicStatus::infeasible_detected;
    entries.push_back(to_json(e));
    out << fmt::format("{} d={} {} value={:.10g} ref={:.10g} status={} iterations={} seconds={:.1f}\n", e.objective_id,
                       e.degree, sense_name(e.sense), e.value, e.reference, conic_status_name(e.status), e.iterations,
                       e.seconds);
  }
  Json j = envelope("relax", cfg);
  j["problem"] = to_json(problem);
  j["entries"] = entries;
  write_json(dir / "relax.json", j);

  if (cfg.first_moments) {
    const OccupationLift lift = lift_occupation(lift_dirac(run.solution), run.solution);
    Json reports = Json::array();
    for (int d : cfg.degrees) {
      const RelaxationProblem rp = assemble(problem, d, objectives.front().objective, Sense::min, cfg.assemble);
      SolverOptions so = cfg.solver_options();
      if (const auto it = cfg.max_iters_by_degree.find(d); it != cfg.max_iters_by_degree.end()) so.max_iters = it->second;
      const FirstMomentReport r = extract_first_moments(solve(rp, so), rp, lift);
      Json rj = to_json(r);
      rj["d"] = d;
      reports.push_back(rj);
      out << fmt::format("first moments d={} max_discrepancy={:.3e} status={}\n", d, r.max_discrepancy,
                         conic_status_name(r.status));
    }
    Json fm = envelope("relax", cfg);
    fm["objective_id"] = objectives.front().id;
    fm["degrees"] = reports;
    write_json(dir / "first_moments.json", fm);
  }
  return infeasible ? kExitNumerical : kExitOk;
}

int run_convergence(const RunConfig& cfg, std::ostream& out) {
  const auto& grids = cfg.convergence_grids;
  if (grids.size() < 3) throw InvalidInput("bad-config-value", "convergence needs at least three grids");
  std::vector<int> ratios;
  for (std::size_t k = 0; k + 1 < grids.size(); ++k) ratios.push_back(refinement_ratio(grids[k], grids[k + 1]));

  std::vector<PreparedRun> runs;
  std::vector<VerifyOutcome> verified;
  for (const GridSpec& g : grids) {
    runs.push_back(prepare_run(cfg, g));
    verified.push_back(verify_field(cfg, runs.back(), configured_field(cfg, runs.back())));
  }

  std::vector<double> diffs;
  for (std::size_t k = 0; k + 1 < runs.size(); ++k)
    diffs.push_back(nested_difference(runs[k].solution, runs[k + 1].solution, ratios[k]));
  const Interval range = cfg.order_range();
  bool pass = true;
  std::vector<std::optional<double>> orders;
  for (std::size_t k = 0; k + 1 < diffs.size(); ++k) {
    const auto o = observed_order(diffs[k], diffs[k + 1], ratios[k + 1]);
    orders.push_back(o);
    if (o && !(*o >= range.lo && *o <= range.hi)) pass = false;
  }

  const fs::path dir = output_dir(cfg);
  Json families = Json::object();
  write_csv(dir / "convergence.csv", [&](std::ostream& os) {
    os << "# " << artifact_tag("convergence", cfg) << '\n' << "quantity,nt,nx,value,order\n";
    for (std::size_t k = 0; k < diffs.size(); ++k)
      os << fmt::format("solution-diff,{},{},{},{}\n", grids[k].nt, grids[k].nx, format_real(diffs[k]),
                        k == 0 ? "" : order_cell(orders[k - 1]));
    for (std::size_t f = 0; f < verified.front().verdicts.size(); ++f) {
      const std::string& name = verified.front().verdicts[f].family;
      Json values = Json::array();
      Json forders = Json::array();
      for (std::size_t k = 0; k < grids.size(); ++k) {
        const double v = verified[k].verdicts[f].max;
        values.push_back(v);
        std::string cell;
        if (k > 0) {
          const double prev = verified[k - 1].verdicts[f].max;
          const auto o = observed_order(prev, v, ratios[k - 1]);
          forders.push_back(order_json(o));
          cell = order_cell(o);
        }
        os << fmt::format("{},{},{},{},{}\n", name, grids[k].nt, grids[k].nx, format_real(v), cell);
      }
      families[name] = {{"values", values}, {"orders", forders}};
    }
  });

  Json jorders = Json::array();
  for (const auto& o : orders) jorders.push_back(order_json(o));
  Json jgrids = Json::array();
  for (const GridSpec& g : grids) jgrids.push_back(grid_text(g));
  Json j = envelope("convergence", cfg);
  j["grids"] = jgrids;
  j["solution"] = {{"differences", diffs}, {"orders", jorders}, {"expected", {range.lo, range.hi}}, {"pass", pass}};
  j["families"] = families;
  j["pass"] = pass;
  write_json(dir / "convergence.json", j);

  for (std::size_t k = 0; k < orders.size(); ++k)
    out << fmt::format("solution order {}->{}: {} (expected [{}, {}])\n", grid_text(grids[k + 1]),
                       grid_text(grids[k + 2]), orders[k] ? fmt::format("{:.3f}", *orders[k]) : "exact", range.lo,
                       range.hi);
  out << (pass ? "convergence PASS\n" : "convergence FAIL\n");
  return pass ? kExitOk : kExitNumerical;
}

Json error_json(const std::string& command, const std::string& code, const std::string& message) {
  return {{"error", code}, {"message", message}, {"command", command}};
}

}  // namespace mvrelax
