// Batch entry point: mvrelax {solve,verify,relax,convergence} [flags].
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mvrelax/commands.hpp"
#include "mvrelax/error.hpp"

namespace {

using namespace mvrelax;

struct Overrides {
  std::string config;
  std::string out;
  std::string suite;
  std::string grid;
  std::string scheme;
  int degree = 0;
};

RunConfig effective_config(const Overrides& o) {
  RunConfig cfg = o.config.empty() ? parse_config(Json::object()) : load_config(o.config);
  if (!o.out.empty()) cfg.output = o.out;
  if (!o.suite.empty()) cfg.suite = parse_suite(o.suite);
  if (!o.grid.empty()) cfg.grid = parse_grid(o.grid);
  if (!o.scheme.empty()) cfg.solve.scheme = parse_scheme(o.scheme);
  if (o.degree != 0) {
    if (o.degree < 1 || o.degree > 5) throw InvalidInput("bad-config-value", "--degree must be in 1..5");
    cfg.degrees = {o.degree};
  }
  return cfg;
}

void report_error(const std::string& command, const std::string& out_dir, const std::string& code,
                  const std::string& message) {
  const Json j = error_json(command, code, message);
  std::cerr << j.dump() << '\n';
  if (out_dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) return;
  std::ofstream os(std::filesystem::path(out_dir) / "error.json", std::ios::binary);
  os << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measure-valued solution verifier and moment relaxations"};
  app.require_subcommand(1);
  Overrides o;
  const auto add_flags = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON run configuration");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--suite", o.suite, "all, mv, emv, ibp, occupation or certificate");
    sub->add_option("--degree", o.degree, "Single relaxation degree");
    sub->add_option("--grid", o.grid, "Grid as NtxNx");
    sub->add_option("--scheme", o.scheme, "crank-nicolson or implicit-euler");
  };
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve the PDE and write the field");
  CLI::App* verify_cmd = app.add_subcommand("verify", "Residual suites on the lifted field");
  CLI::App* relax_cmd = app.add_subcommand("relax", "Moment relaxation bounds");
  CLI::App* conv_cmd = app.add_subcommand("convergence", "Observed order over nested grids");
  for (CLI::App* sub : {solve_cmd, verify_cmd, relax_cmd, conv_cmd}) add_flags(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    (void)app.exit(e);
    return kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  std::string out_dir = o.out;
  try {
    const RunConfig cfg = effective_config(o);
    out_dir = cfg.output;
    if (command == "solve") return run_solve(cfg, std::cout);
    if (command == "verify") return run_verify(cfg, std::cout);
    if (command == "relax") return run_relax(cfg, std::cout);
    return run_convergence(cfg, std::cout);
  } catch (const InvalidInput& e) {
    report_error(command, out_dir, e.code(), e.what());
    return kExitConfig;
  } catch (const Error& e) {
    report_error(command, out_dir, e.code(), e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    report_error(command, out_dir, "internal-error", e.what());
    return kExitNumerical;
  }
}
