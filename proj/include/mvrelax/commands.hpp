#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "mvrelax/config.hpp"
#include "mvrelax/emv_verifier.hpp"
#include "mvrelax/occupation.hpp"

namespace mvrelax {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitConfig = 2;

// Problem, grid, initial samples and solve of a config on one grid.
struct PreparedRun {
  PdeProblem problem;
  SpaceTimeGrid grid;
  std::vector<double> initial;  // empty for polynomial initial data
  FieldSolution solution;
};

[[nodiscard]] PreparedRun prepare_run(const RunConfig& cfg, const GridSpec& grid);

// Dirac lift of the solve, or the bump field for "counterexample".
[[nodiscard]] YoungField configured_field(const RunConfig& cfg, const PreparedRun& run);

struct FamilyVerdict {
  std::string family;
  double max = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct VerifyOutcome {
  std::vector<ResidualReport> reports;
  std::vector<FamilyVerdict> verdicts;  // reports followed by the certificate
  ConcentrationReport concentration;
  OccupationMasses masses;
  std::optional<CertificateResult> certificate;
};

// Runs the suites selected by cfg.suite against `field`.
[[nodiscard]] VerifyOutcome verify_field(const RunConfig& cfg, const PreparedRun& run, const YoungField& field);

// Comment line carried by every CSV artifact.
[[nodiscard]] std::string artifact_tag(const std::string& command, const RunConfig& cfg);

// Each command writes its artifacts under cfg.output and a summary to `out`.
// Return values are exit codes; errors propagate as exceptions.

// solution.csv, solution.json.
int run_solve(const RunConfig& cfg, std::ostream& out);
// residuals/<family>.json, verify.json, young_field.csv, boundary.csv.
// Exit 1 when a family fails.
int run_verify(const RunConfig& cfg, std::ostream& out);
// bounds.csv, relax.json and first_moments.json when enabled. Exit 1 when a
// relaxation is detected infeasible.
int run_relax(const RunConfig& cfg, std::ostream& out);
// convergence.csv, convergence.json. Solution differences between nested
// grids give the observed order; exit 1 when it leaves cfg.order_range().
int run_convergence(const RunConfig& cfg, std::ostream& out);

// {"error": code, "message": text, "command": name}.
[[nodiscard]] Json error_json(const std::string& command, const std::string& code, const std::string& message);

// Observed order log(coarse / fine) / log(ratio); nullopt when both are zero.
[[nodiscard]] std::optional<double> observed_order(double coarse, double fine, double ratio);

}  // namespace mvrelax
