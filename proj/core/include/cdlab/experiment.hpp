#pragma once

// Orchestration behind the command-line subcommands: single runs, eta sweeps, two-resolution
// verification and hypothesis reports. The execute_* functions do no I/O; the cmd_* functions
// write the artifacts and return the process exit status.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cdlab/config.hpp"
#include "cdlab/csv_io.hpp"
#include "cdlab/diagnostics.hpp"
#include "cdlab/solver.hpp"

namespace cdlab {

enum class ExitStatus : int {
  ok = 0,
  config_error = 2,
  solver_failure = 3,
  invariant_failure = 4,
};

struct CommandOptions {
  std::string out_dir;                 // empty: output.dir from the config
  std::optional<std::uint64_t> seed;   // overrides the config seed
  std::size_t resolution_factor = 1;   // multiplies grid.n_cells
};

/// Config with the command-line overrides applied and re-validated.
RunConfig apply_options(RunConfig cfg, const CommandOptions& opt);

struct RunResult {
  std::size_t n_cells = 0;
  Trajectory trajectory;
  std::vector<CheckResult> checks;
  ExitStatus status = ExitStatus::ok;
  std::string reason = "ok";
  std::string detail;
};

RunResult execute_run(const RunConfig& cfg);

struct HypothesisLevel {
  std::size_t n_cells = 0;
  MixingHypothesisReport mixing;
  PotentialHypothesisReport potentials;
};

struct HypothesisVerdict {
  std::string name;
  double coarse = 0.0;
  double fine = 0.0;
  bool within_ceiling = true;  // at both resolutions
  bool stable = true;          // fine <= growth_limit * coarse (plus a tiny absolute floor)
  bool pass = true;
};

struct HypothesesReport {
  HypothesisLevel coarse;
  HypothesisLevel fine;
  std::vector<HypothesisVerdict> verdicts;
  bool pass = true;

  std::vector<std::string> failed() const;
};

HypothesesReport execute_hypotheses(const RunConfig& cfg);

struct InvariantComparison {
  std::string name;
  CheckResult coarse;
  CheckResult fine;
  bool pass = true;
};

struct VerifyResult {
  HypothesesReport hypotheses;
  std::optional<RunResult> coarse;
  std::optional<RunResult> fine;
  std::vector<InvariantComparison> invariants;
  ExitStatus status = ExitStatus::ok;
  std::string reason = "ok";
  std::string detail;
};

/// Hypotheses first (a failure skips the runs), then the configured and 2x resolutions.
/// Every check must pass at both resolutions except the Groenwall certificate, which may
/// fail at the configured resolution if it passes at 2x.
VerifyResult execute_verify(const RunConfig& cfg);

struct SweepResult {
  std::vector<double> etas;
  std::vector<RunResult> runs;
  std::vector<csv::SweepRow> rows;
  std::vector<std::size_t> flagged;  // rows whose ratio exceeds the Cauchy ratio
  ExitStatus status = ExitStatus::ok;
  std::string reason = "ok";
  std::string detail;
};

/// Distance between two runs of the same grid and snapshot cadence.
double trajectory_distance(const Trajectory& a, const Trajectory& b, SweepNorm norm);

/// Runs every rung concurrently, then tabulates distances between consecutive rungs.
SweepResult execute_sweep(const RunConfig& cfg);

/// 64-bit FNV-1a, written as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

/// Canonical JSON text of the effective config minus the output directory; its hash
/// identifies an experiment.
std::string config_echo(const RunConfig& cfg);

int cmd_run(const RunConfig& cfg, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, std::ostream& log);
int cmd_verify(const RunConfig& cfg, std::ostream& log);
int cmd_hypotheses(const RunConfig& cfg, std::ostream& log);

/// Loads the config, applies overrides and runs `command`. Config errors are reported with
/// their key path and, when an output directory is known, a summary.json; status 2.
int dispatch(const std::string& command, const std::string& config_path, const CommandOptions& opt,
             std::ostream& log, std::ostream& err);

}  // namespace cdlab
