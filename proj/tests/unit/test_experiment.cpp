#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cdlab/errors.hpp"
#include "cdlab/experiment.hpp"

using namespace cdlab;
namespace fs = std::filesystem;

namespace {

// Small mixed run with a cosine drift difference; fast enough for unit tests.
constexpr const char* kDrift = R"(
[grid]
n_cells = 32
[time]
t_end = 0.02
snapshots = 4
[initial]
family = "cosine_mix"
a1 = 0.3
a2 = 0.2
k2 = 2
[potential.v1]
kind = "cosine"
amplitudes = [0.08]
phases = [-1.5707963267948966]
)";

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "cdlab_experiment_tests" / name;
  fs::remove_all(dir);
  return dir;
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Fnv1a, KnownVectors) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(fnv1a_hex("foobar"), "85944171f73967e8");
}

TEST(ConfigEcho, IgnoresOutputDirButNotPhysics) {
  RunConfig a = parse_config(kDrift);
  RunConfig b = a;
  b.output_dir = "elsewhere";
  EXPECT_EQ(config_echo(a), config_echo(b));
  b.scheme.eta = 0.2;
  EXPECT_NE(fnv1a_hex(config_echo(a)), fnv1a_hex(config_echo(b)));
  EXPECT_TRUE(nlohmann::json::accept(config_echo(a)));
}

TEST(ApplyOptions, Overrides) {
  CommandOptions opt;
  opt.out_dir = "x";
  opt.seed = 9;
  opt.resolution_factor = 2;
  const RunConfig c = apply_options(parse_config(kDrift), opt);
  EXPECT_EQ(c.output_dir, "x");
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.n_cells, 64u);
  opt.resolution_factor = 0;
  EXPECT_THROW(apply_options(parse_config(kDrift), opt), ConfigError);
}

TEST(ExecuteRun, DriftRunPasses) {
  const RunResult r = execute_run(parse_config(kDrift));
  EXPECT_EQ(r.status, ExitStatus::ok) << r.detail;
  EXPECT_EQ(r.trajectory.snapshots.size(), 5u);
  EXPECT_EQ(r.trajectory.records.size(), 5u);
  EXPECT_EQ(r.checks.size(), 7u);
}

TEST(ExecuteRun, ReactionModeWithZeroRatesIsBitIdentical) {
  const RunConfig plain = parse_config(kDrift);
  const RunConfig zero = parse_config(std::string(kDrift) + "[reaction.f1]\nkind = \"zero\"\n");
  ASSERT_TRUE(zero.reaction.enabled);
  const RunResult a = execute_run(plain);
  const RunResult b = execute_run(zero);
  ASSERT_EQ(a.trajectory.snapshots.size(), b.trajectory.snapshots.size());
  for (std::size_t k = 0; k < a.trajectory.snapshots.size(); ++k) {
    for (std::size_t i = 0; i < 32; ++i) {
      EXPECT_EQ(a.trajectory.snapshots[k].rho1[i], b.trajectory.snapshots[k].rho1[i]);
      EXPECT_EQ(a.trajectory.snapshots[k].rho2[i], b.trajectory.snapshots[k].rho2[i]);
    }
  }
  EXPECT_EQ(b.checks.back().name, "reaction_mass_law");
  EXPECT_TRUE(b.checks.back().pass);
}

TEST(ExecuteRun, SolverFailureIsStatusThree) {
  // Species 1 vanishes on two neighbouring cells and so does species 2: the face between is undefined.
  const fs::path dir = scratch("vacuum");
  fs::create_directories(dir);
  std::ofstream(dir / "r.csv") << "x,v\n0.0,1\n0.45,1\n0.46,0\n0.54,0\n0.55,1\n";
  RunConfig c = parse_config("[grid]\nn_cells = 64\n[time]\nt_end = 0.01\nsnapshots = 2\n"
                             "[initial]\nfamily = \"tabulated\"\nrho1_csv = \"r.csv\"\nrho2_csv = \"r.csv\"\n",
                             dir.string());
  const RunResult r = execute_run(c);
  EXPECT_EQ(r.status, ExitStatus::solver_failure);
  EXPECT_NE(r.detail.find("face"), std::string::npos) << r.detail;
}

TEST(TrajectoryDistance, NormsAndErrors) {
  const RunResult a = execute_run(parse_config(kDrift));
  EXPECT_EQ(trajectory_distance(a.trajectory, a.trajectory, SweepNorm::L1_final), 0.0);
  EXPECT_EQ(trajectory_distance(a.trajectory, a.trajectory, SweepNorm::L2L1_trajectory), 0.0);
  Trajectory b = a.trajectory;
  // Shift every snapshot of species 1 by 0.1: L1 distance 0.1 at every time.
  for (auto& s : b.snapshots) s.rho1 = s.rho1 + 0.1;
  EXPECT_NEAR(trajectory_distance(a.trajectory, b, SweepNorm::L1_final), 0.1, 1e-12);
  EXPECT_NEAR(trajectory_distance(a.trajectory, b, SweepNorm::L2L1_trajectory), 0.1 * std::sqrt(0.02), 1e-12);
  b.snapshots.pop_back();
  EXPECT_THROW(trajectory_distance(a.trajectory, b, SweepNorm::L1_final), DimensionError);
}

TEST(ExecuteSweep, RowsAndRatios) {
  RunConfig c = parse_config(kDrift);
  c.sweep.etas = {0.5, 0.25, 0.125, 0.0625};
  const SweepResult s = execute_sweep(c);
  ASSERT_EQ(s.rows.size(), 4u);
  EXPECT_TRUE(std::isnan(s.rows[0].ratio));
  EXPECT_TRUE(std::isnan(s.rows[3].distance));
  EXPECT_TRUE(std::isnan(s.rows[3].ratio));
  for (std::size_t j = 1; j < 3; ++j) EXPECT_DOUBLE_EQ(s.rows[j].ratio, s.rows[j].distance / s.rows[j - 1].distance);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_GT(s.rows[j].distance, 0.0);
  EXPECT_EQ(s.runs.size(), 4u);
}

TEST(ExecuteSweep, FlagsSlowContraction) {
  RunConfig c = parse_config(kDrift);
  c.sweep.etas = {0.5, 0.25, 0.125, 0.0625};
  c.sweep.cauchy_ratio = 1e-6;
  const SweepResult s = execute_sweep(c);
  ASSERT_EQ(s.flagged.size(), 1u);
  EXPECT_EQ(s.flagged[0], 2u);
  EXPECT_EQ(s.status, ExitStatus::invariant_failure);
  EXPECT_EQ(s.reason, "cauchy_flagged");
}

TEST(ExecuteHypotheses, UniformPassesWithZeros) {
  const HypothesesReport h = execute_hypotheses(parse_config("[grid]\nn_cells = 32\n"));
  EXPECT_TRUE(h.pass);
  ASSERT_EQ(h.verdicts.size(), 6u);
  for (const auto& v : h.verdicts) {
    if (v.name == "H1.llogl") continue;
    EXPECT_EQ(v.coarse, 0.0) << v.name;
  }
  EXPECT_EQ(h.fine.n_cells, 64u);
}

TEST(ExecuteHypotheses, TabulatedKinkIsNotRefinementStable) {
  const RunConfig c = parse_config("[grid]\nn_cells = 128\n[potential.v1]\nkind = \"tabulated\"\ncsv = \"sawtooth_v.csv\"\n",
                                   CDLAB_TEST_DATA_DIR);
  const HypothesesReport h = execute_hypotheses(c);
  EXPECT_FALSE(h.pass);
  const auto failed = h.failed();
  EXPECT_NE(std::find(failed.begin(), failed.end(), "H4.v_w31"), failed.end());
}

TEST(ExecuteVerify, DriftPassesAtBothResolutions) {
  const VerifyResult v = execute_verify(parse_config(kDrift));
  EXPECT_EQ(v.status, ExitStatus::ok) << v.detail;
  ASSERT_TRUE(v.coarse && v.fine);
  EXPECT_EQ(v.fine->n_cells, 64u);
  EXPECT_EQ(v.invariants.back().name, "sqrt_sigma_dissipation");
}

TEST(ExecuteVerify, SegregatedFailsBeforeRunning) {
  const VerifyResult v = execute_verify(load_config(std::string(CDLAB_CONFIG_DIR) + "/segregated.toml"));
  EXPECT_EQ(v.status, ExitStatus::invariant_failure);
  EXPECT_EQ(v.reason, "hypothesis_failure");
  EXPECT_FALSE(v.coarse.has_value());
  EXPECT_NE(v.detail.find("H2"), std::string::npos);
}

TEST(Dispatch, RunWritesArtifacts) {
  const fs::path dir = scratch("run");
  fs::create_directories(dir);
  std::ofstream(dir / "c.toml") << kDrift;
  std::ostringstream log, err;
  CommandOptions opt;
  opt.out_dir = (dir / "out").string();
  EXPECT_EQ(dispatch("run", (dir / "c.toml").string(), opt, log, err), 0) << err.str();
  for (const char* f : {"snapshots.csv", "diagnostics.csv", "summary.json"}) EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
  const auto j = read_json(dir / "out" / "summary.json");
  EXPECT_EQ(j["exit_code"], 0);
  EXPECT_EQ(j["command"], "run");
  EXPECT_EQ(j["config_hash"].get<std::string>().size(), 16u);
  EXPECT_EQ(j["run"]["snapshots"], 5);
  EXPECT_EQ(j["run"]["checks"].size(), 7u);
}

TEST(Dispatch, DeterministicOutputs) {
  const fs::path dir = scratch("det");
  fs::create_directories(dir);
  std::ofstream(dir / "d.toml") << "seed = 3\n" + std::string(kDrift);
  std::ostringstream log, err;
  CommandOptions a, b;
  a.out_dir = (dir / "a").string();
  b.out_dir = (dir / "b").string();
  ASSERT_EQ(dispatch("run", (dir / "d.toml").string(), a, log, err), 0);
  ASSERT_EQ(dispatch("run", (dir / "d.toml").string(), b, log, err), 0);
  EXPECT_EQ(slurp(dir / "a" / "snapshots.csv"), slurp(dir / "b" / "snapshots.csv"));
  EXPECT_EQ(slurp(dir / "a" / "diagnostics.csv"), slurp(dir / "b" / "diagnostics.csv"));
  EXPECT_EQ(read_json(dir / "a" / "summary.json")["config_hash"], read_json(dir / "b" / "summary.json")["config_hash"]);
}

TEST(Dispatch, ConfigErrorsReportKey) {
  const fs::path dir = scratch("cfgerr");
  fs::create_directories(dir);
  std::ofstream(dir / "c.toml") << "[scheme]\neta = 0.7\n";
  std::ostringstream log, err;
  CommandOptions opt;
  opt.out_dir = (dir / "out").string();
  EXPECT_EQ(dispatch("run", (dir / "c.toml").string(), opt, log, err), 2);
  EXPECT_NE(err.str().find("scheme.eta"), std::string::npos);
  const auto j = read_json(dir / "out" / "summary.json");
  EXPECT_EQ(j["exit_code"], 2);
  EXPECT_EQ(j["key"], "scheme.eta");
  EXPECT_EQ(dispatch("bogus", (dir / "c.toml").string(), opt, log, err), 2);
  EXPECT_EQ(dispatch("run", (dir / "missing.toml").string(), opt, log, err), 2);
}
