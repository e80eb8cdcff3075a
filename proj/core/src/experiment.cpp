#include "cdlab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "cdlab/errors.hpp"

namespace cdlab {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Setup {
  PotentialPair pair;
  SpeciesState initial;
  std::optional<ReactionSpec> reactions;
};

// Anything the library rejects while building the inputs is a configuration problem.
Setup build_setup(const RunConfig& cfg) {
  const Grid grid = make_grid(cfg);
  auto pair = [&] {
    try {
      return make_potentials(cfg, grid);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError("potential", e.what());
    }
  }();
  auto initial = [&] {
    try {
      return make_initial_state(cfg, grid);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError("initial", e.what());
    }
  }();
  return {std::move(pair), std::move(initial), make_reactions(cfg)};
}

SchemeConfig scheme_of(const RunConfig& cfg) {
  SchemeConfig s = cfg.scheme;
  s.t_end = cfg.t_end;
  return s;
}

json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json to_json(const CheckResult& c) {
  return {{"name", c.name}, {"pass", c.pass}, {"worst", num(c.worst)}, {"detail", c.detail}};
}

json potential_json(const PotentialConfig& p) {
  json j{{"kind", to_string(p.kind)}};
  if (p.kind == PotentialKind::cosine_sum) {
    json a = json::array(), k = json::array(), ph = json::array();
    for (const auto& t : p.terms) {
      a.push_back(t.amplitude);
      k.push_back(t.wavenumber);
      ph.push_back(t.phase);
    }
    j["amplitudes"] = a;
    j["wavenumbers"] = k;
    j["phases"] = ph;
  }
  if (p.kind == PotentialKind::tabulated) j["csv"] = p.csv;
  return j;
}

json reaction_json(const ReactionFunctionConfig& r) {
  json j{{"kind", r.kind}};
  if (r.kind == "logistic") {
    j["a"] = r.a;
    j["b"] = r.b;
  } else if (r.kind == "tabulated_bilinear") {
    j["rho1_max"] = r.rho1_max;
    j["rho2_max"] = r.rho2_max;
    j["n1"] = r.n1;
    j["n2"] = r.n2;
    j["values"] = r.values;
  }
  return j;
}

json config_json(const RunConfig& cfg) {
  json j;
  j["grid"] = {{"n_cells", cfg.n_cells}};
  j["time"] = {{"t_end", cfg.t_end}, {"snapshots", cfg.snapshots}};
  j["scheme"] = {{"eta", cfg.scheme.eta},
                 {"cfl_safety", cfg.scheme.cfl_safety},
                 {"dt_max", num(cfg.scheme.dt_max)},
                 {"positivity_retry_limit", cfg.scheme.positivity_retry_limit},
                 {"flux_ratio_rule", to_string(cfg.scheme.flux_ratio_rule)}};
  const auto& in = cfg.initial;
  j["initial"] = {{"family", to_string(in.family)}, {"a1", in.a1}, {"a2", in.a2},
                  {"k1", in.k1}, {"k2", in.k2}, {"phase", in.phase},
                  {"vacuum_exponent", in.vacuum_exponent}, {"noise", in.noise}};
  if (in.family == InitialFamily::tabulated) {
    j["initial"]["rho1_csv"] = in.rho1_csv;
    j["initial"]["rho2_csv"] = in.rho2_csv;
  }
  j["potential"] = {{"v1", potential_json(cfg.v1)}, {"v2", potential_json(cfg.v2)}};
  if (cfg.reaction.enabled) {
    j["reaction"] = {{"f1", reaction_json(cfg.reaction.f1)}, {"f2", reaction_json(cfg.reaction.f2)}};
  }
  const auto& c = cfg.checks;
  j["checks"] = {{"mass_tolerance", c.options.mass_tolerance},
                 {"gronwall_slack", c.options.gronwall_slack},
                 {"entropy_tolerance_factor", c.options.entropy_tolerance_factor},
                 {"sobolev_ceiling", c.sobolev_ceiling},
                 {"llogl_ceiling", c.mixing.llogl_ceiling},
                 {"tv_ceiling", c.mixing.tv_ceiling},
                 {"mixing_ceiling", c.mixing.mixing_ceiling},
                 {"growth_limit", c.growth_limit}};
  j["sweep"] = {{"etas", cfg.sweep.ladder()},
                {"norm", to_string(cfg.sweep.norm)},
                {"cauchy_ratio", cfg.sweep.cauchy_ratio}};
  j["seed"] = cfg.seed;
  return j;
}

json run_json(const RunResult& r) {
  const auto& t = r.trajectory;
  std::size_t max_clamp = 0;
  for (const auto& rec : t.records) max_clamp = std::max(max_clamp, rec.clamp_count);
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"n_cells", r.n_cells},
          {"status", static_cast<int>(r.status)},
          {"reason", r.reason},
          {"detail", r.detail},
          {"steps", t.steps},
          {"snapshots", t.snapshots.size()},
          {"total_retries", t.total_retries},
          {"min_dt", num(t.min_dt)},
          {"max_dt", num(t.max_dt)},
          {"final_time", t.snapshots.empty() ? 0.0 : t.snapshots.back().time},
          {"final_clamp_count", t.records.empty() ? 0 : t.records.back().clamp_count},
          {"max_clamp_count", max_clamp},
          {"sqrt_sigma_dissipation", num(sqrt_sigma_dissipation(t))},
          {"checks", checks}};
}

json summary_head(const std::string& command, const RunConfig& cfg, ExitStatus status,
                  const std::string& reason, const std::string& detail) {
  const std::string echo = config_echo(cfg);
  return {{"schema", "cdlab summary v1"},
          {"command", command},
          {"exit_code", static_cast<int>(status)},
          {"exit_reason", reason},
          {"detail", detail},
          {"config_hash", fnv1a_hex(echo)},
          {"config", json::parse(echo)},
          {"output_dir", cfg.output_dir}};
}

std::filesystem::path prepare_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  std::filesystem::create_directories(p);
  return p;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write '" + path.string() + "'");
  os << text;
}

void write_run_files(const std::filesystem::path& dir, const RunResult& r, const std::string& suffix) {
  std::ostringstream snaps, diags;
  csv::write_snapshots(snaps, r.trajectory);
  csv::write_diagnostics(diags, r.trajectory.records);
  write_text(dir / ("snapshots" + suffix + ".csv"), snaps.str());
  write_text(dir / ("diagnostics" + suffix + ".csv"), diags.str());
}

void write_summary(const std::filesystem::path& dir, const json& j) {
  write_text(dir / "summary.json", j.dump(2) + "\n");
}

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ",") + n;
  return out;
}

void log_checks(std::ostream& log, const std::vector<CheckResult>& checks) {
  for (const auto& c : checks) {
    log << (c.pass ? "  PASS " : "  FAIL ") << c.name << "  " << c.detail << '\n';
  }
}

bool stable(double coarse, double fine, double growth) {
  return std::fabs(fine) <= growth * std::fabs(coarse) + 1e-9;
}

// Right-endpoint sum in time. The initial H^1 norm of sqrt(sigma) may be infinite (cusped
// data), and only the time integral is controlled, so t = 0 is left out.
double dissipation_right_sum(const Trajectory& t) {
  double acc = 0.0;
  for (std::size_t k = 1; k < t.snapshots.size(); ++k) {
    acc += sqrt_sigma_h1_squared(t.snapshots[k]) * (t.snapshots[k].time - t.snapshots[k - 1].time);
  }
  return acc;
}

HypothesisLevel hypothesis_level(const RunConfig& cfg) {
  const Setup s = build_setup(cfg);
  HypothesisLevel h;
  h.n_cells = cfg.n_cells;
  h.mixing = check_h1_h2(s.initial, cfg.checks.mixing);
  h.potentials = check_h3_h4(s.pair, {cfg.checks.sobolev_ceiling});
  return h;
}

}  // namespace

RunConfig apply_options(RunConfig cfg, const CommandOptions& opt) {
  if (opt.seed) cfg.seed = *opt.seed;
  if (!opt.out_dir.empty()) cfg.output_dir = opt.out_dir;
  if (opt.resolution_factor < 1) throw ConfigError("resolution-factor", "must be >= 1");
  cfg = cfg.refined(opt.resolution_factor);
  cfg.validate();
  return cfg;
}

RunResult execute_run(const RunConfig& cfg) {
  const Setup s = build_setup(cfg);
  const SchemeConfig scheme = scheme_of(cfg);
  RunResult res;
  res.n_cells = cfg.n_cells;
  res.trajectory = run(s.initial, s.pair, scheme, s.reactions ? &*s.reactions : nullptr, cfg.snapshots,
                       {make_recorder(s.pair, scheme)});
  CheckOptions opt = cfg.checks.options;
  opt.reactions = cfg.reaction.enabled;
  res.checks = check_invariants(res.trajectory, s.initial.grid().dx(), opt);
  if (!res.trajectory.ok()) {
    res.status = ExitStatus::solver_failure;
    res.reason = "solver_failure";
    res.detail = res.trajectory.error_message;
    return res;
  }
  std::vector<std::string> failed;
  for (const auto& c : res.checks) {
    if (!c.pass) failed.push_back(c.name);
  }
  if (!failed.empty()) {
    res.status = ExitStatus::invariant_failure;
    res.reason = "invariant_failure";
    res.detail = join(failed);
  }
  return res;
}

std::vector<std::string> HypothesesReport::failed() const {
  std::vector<std::string> out;
  for (const auto& v : verdicts) {
    if (!v.pass) out.push_back(v.name);
  }
  return out;
}

HypothesesReport execute_hypotheses(const RunConfig& cfg) {
  HypothesesReport rep;
  rep.coarse = hypothesis_level(cfg);
  rep.fine = hypothesis_level(cfg.refined(2));
  const double g = cfg.checks.growth_limit;
  const double sob = cfg.checks.sobolev_ceiling;
  const auto& c = rep.coarse;
  const auto& f = rep.fine;
  auto add = [&](std::string name, double qc, double qf, bool within) {
    HypothesisVerdict v{std::move(name), qc, qf, within, stable(qc, qf, g), true};
    v.pass = v.within_ceiling && v.stable;
    rep.verdicts.push_back(v);
  };
  add("H1.llogl", c.mixing.llogl, f.mixing.llogl, c.mixing.h1_pass && f.mixing.h1_pass);
  add("H2.tv_logratio", c.mixing.tv_logratio, f.mixing.tv_logratio, c.mixing.h2_pass && f.mixing.h2_pass);
  add("H2.mixing_bound", c.mixing.mixing_bound, f.mixing.mixing_bound,
      c.mixing.h2_pass && f.mixing.h2_pass);
  add("H3.v1_w21", c.potentials.h3_v1, f.potentials.h3_v1,
      c.potentials.h3_v1 <= sob && f.potentials.h3_v1 <= sob);
  add("H3.v2_w21", c.potentials.h3_v2, f.potentials.h3_v2,
      c.potentials.h3_v2 <= sob && f.potentials.h3_v2 <= sob);
  add("H4.v_w31", c.potentials.h4, f.potentials.h4, c.potentials.h4 <= sob && f.potentials.h4 <= sob);
  rep.pass = rep.failed().empty();
  return rep;
}

VerifyResult execute_verify(const RunConfig& cfg) {
  VerifyResult res;
  res.hypotheses = execute_hypotheses(cfg);
  if (!res.hypotheses.pass) {
    res.status = ExitStatus::invariant_failure;
    res.reason = "hypothesis_failure";
    res.detail = join(res.hypotheses.failed());
    return res;
  }
  const RunConfig fine_cfg = cfg.refined(2);
  auto fine_future = std::async(std::launch::async, [&fine_cfg] { return execute_run(fine_cfg); });
  res.coarse = execute_run(cfg);
  res.fine = fine_future.get();

  for (const RunResult* r : {&*res.coarse, &*res.fine}) {
    if (r->status == ExitStatus::solver_failure) {
      res.status = ExitStatus::solver_failure;
      res.reason = "solver_failure";
      res.detail = "n_cells=" + std::to_string(r->n_cells) + ": " + r->detail;
      return res;
    }
  }

  for (const auto& cc : res.coarse->checks) {
    const auto it = std::find_if(res.fine->checks.begin(), res.fine->checks.end(),
                                 [&](const CheckResult& x) { return x.name == cc.name; });
    InvariantComparison cmp{cc.name, cc, it != res.fine->checks.end() ? *it : CheckResult{cc.name, false, 0.0, "missing at 2x"}};
    cmp.pass = cc.name == "gronwall_certificate" ? (cmp.coarse.pass || cmp.fine.pass)
                                     : (cmp.coarse.pass && cmp.fine.pass);
    res.invariants.push_back(cmp);
  }
  {
    const double dc = dissipation_right_sum(res.coarse->trajectory);
    const double df = dissipation_right_sum(res.fine->trajectory);
    InvariantComparison cmp{"sqrt_sigma_dissipation",
                            {"sqrt_sigma_dissipation", std::isfinite(dc), dc, ""},
                            {"sqrt_sigma_dissipation", std::isfinite(df), df, ""}};
    cmp.pass = cmp.coarse.pass && cmp.fine.pass && stable(dc, df, cfg.checks.growth_limit);
    cmp.coarse.detail = "int ||sqrt(sigma)||_H1^2 dt = " + std::to_string(dc);
    cmp.fine.detail = "int ||sqrt(sigma)||_H1^2 dt = " + std::to_string(df);
    res.invariants.push_back(cmp);
  }

  std::vector<std::string> failed;
  for (const auto& c : res.invariants) {
    if (!c.pass) failed.push_back(c.name);
  }
  if (!failed.empty()) {
    res.status = ExitStatus::invariant_failure;
    res.reason = "invariant_failure";
    res.detail = join(failed);
  }
  return res;
}

double trajectory_distance(const Trajectory& a, const Trajectory& b, SweepNorm norm) {
  if (a.snapshots.empty() || a.snapshots.size() != b.snapshots.size())
    throw DimensionError("trajectories have different snapshot counts");
  auto l1 = [](const SpeciesState& x, const SpeciesState& y) {
    if (!(x.grid() == y.grid())) throw DimensionError("trajectories live on different grids");
    double s = 0.0;
    for (std::size_t i = 0; i < x.grid().size(); ++i) {
      s += std::fabs(x.rho1[i] - y.rho1[i]) + std::fabs(x.rho2[i] - y.rho2[i]);
    }
    return s * x.grid().dx();
  };
  if (norm == SweepNorm::L1_final) return l1(a.snapshots.back(), b.snapshots.back());
  double acc = 0.0;
  double prev = 0.0;
  for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
    const double d = l1(a.snapshots[k], b.snapshots[k]);
    const double d2 = d * d;
    if (k > 0) acc += 0.5 * (prev + d2) * (a.snapshots[k].time - a.snapshots[k - 1].time);
    prev = d2;
  }
  return std::sqrt(acc);
}

SweepResult execute_sweep(const RunConfig& cfg) {
  SweepResult res;
  res.etas = cfg.sweep.ladder();
  std::vector<std::future<RunResult>> jobs;
  for (double eta : res.etas) {
    RunConfig member = cfg;
    member.scheme.eta = eta;
    jobs.push_back(std::async(std::launch::async, [member] { return execute_run(member); }));
  }
  for (auto& j : jobs) res.runs.push_back(j.get());

  for (std::size_t j = 0; j < res.runs.size(); ++j) {
    if (res.runs[j].status == ExitStatus::solver_failure) {
      res.status = ExitStatus::solver_failure;
      res.reason = "solver_failure";
      res.detail = "eta=" + std::to_string(res.etas[j]) + ": " + res.runs[j].detail;
      return res;
    }
  }

  const std::size_t L = res.etas.size();
  std::vector<double> d(L, kNaN);
  for (std::size_t j = 0; j + 1 < L; ++j) {
    d[j] = trajectory_distance(res.runs[j].trajectory, res.runs[j + 1].trajectory, cfg.sweep.norm);
  }
  for (std::size_t j = 0; j < L; ++j) {
    csv::SweepRow row{res.etas[j], d[j], kNaN};
    if (j >= 1 && j + 1 < L) row.ratio = d[j] / d[j - 1];
    res.rows.push_back(row);
    // Cauchy statement d_{j+1} / d_j <= ratio for j >= 1, i.e. rows from index 2 on.
    if (j >= 2 && j + 1 < L && !(row.ratio <= cfg.sweep.cauchy_ratio) && d[j] != 0.0) {
      res.flagged.push_back(j);
    }
  }

  std::vector<std::string> failed;
  for (std::size_t j = 0; j < L; ++j) {
    if (res.runs[j].status != ExitStatus::ok) {
      failed.push_back("eta=" + std::to_string(res.etas[j]) + ":" + res.runs[j].detail);
    }
  }
  if (!failed.empty()) {
    res.status = ExitStatus::invariant_failure;
    res.reason = "invariant_failure";
    res.detail = join(failed);
  } else if (!res.flagged.empty()) {
    res.status = ExitStatus::invariant_failure;
    res.reason = "cauchy_flagged";
    std::vector<std::string> rows;
    for (auto j : res.flagged) rows.push_back("row " + std::to_string(j));
    res.detail = join(rows);
  }
  return res;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_echo(const RunConfig& cfg) { return config_json(cfg).dump(); }

int cmd_run(const RunConfig& cfg, std::ostream& log) {
  const RunResult r = execute_run(cfg);
  const auto dir = prepare_dir(cfg.output_dir);
  write_run_files(dir, r, "");
  json j = summary_head("run", cfg, r.status, r.reason, r.detail);
  j["run"] = run_json(r);
  write_summary(dir, j);

  log << "run n_cells=" << r.n_cells << " steps=" << r.trajectory.steps
      << " snapshots=" << r.trajectory.snapshots.size() << '\n';
  log_checks(log, r.checks);
  log << "exit " << static_cast<int>(r.status) << " " << r.reason
      << (r.detail.empty() ? "" : " (" + r.detail + ")") << '\n';
  return static_cast<int>(r.status);
}

int cmd_sweep(const RunConfig& cfg, std::ostream& log) {
  const SweepResult s = execute_sweep(cfg);
  const auto dir = prepare_dir(cfg.output_dir);
  std::ostringstream os;
  csv::write_sweep(os, s.rows);
  write_text(dir / "sweep.csv", os.str());

  json j = summary_head("sweep", cfg, s.status, s.reason, s.detail);
  json rows = json::array();
  for (const auto& r : s.rows) rows.push_back({{"eta", r.eta}, {"distance", num(r.distance)}, {"ratio", num(r.ratio)}});
  j["sweep"] = {{"norm", to_string(cfg.sweep.norm)},
                {"cauchy_ratio", cfg.sweep.cauchy_ratio},
                {"rows", rows},
                {"flagged_rows", s.flagged}};
  json members = json::array();
  for (const auto& r : s.runs) members.push_back(run_json(r));
  j["members"] = members;
  write_summary(dir, j);

  log << "eta_j                 d_j                   ratio\n";
  for (const auto& r : s.rows) {
    char line[128];
    std::snprintf(line, sizeof line, "%-21.6g %-21.6e %-10.4f\n", r.eta, r.distance, r.ratio);
    log << line;
  }
  log << "exit " << static_cast<int>(s.status) << " " << s.reason
      << (s.detail.empty() ? "" : " (" + s.detail + ")") << '\n';
  return static_cast<int>(s.status);
}

namespace {

json hypotheses_json(const HypothesesReport& h) {
  json v = json::array();
  for (const auto& x : h.verdicts) {
    v.push_back({{"name", x.name}, {"coarse", num(x.coarse)}, {"fine", num(x.fine)},
                 {"within_ceiling", x.within_ceiling}, {"stable", x.stable}, {"pass", x.pass}});
  }
  return {{"n_cells", {h.coarse.n_cells, h.fine.n_cells}},
          {"clamp_count", {h.coarse.mixing.clamp_count, h.fine.mixing.clamp_count}},
          {"verdicts", v},
          {"pass", h.pass}};
}

void log_hypotheses(std::ostream& log, const HypothesesReport& h) {
  char line[160];
  std::snprintf(line, sizeof line, "%-18s %16s %16s  %s\n", "hypothesis",
                ("n=" + std::to_string(h.coarse.n_cells)).c_str(),
                ("n=" + std::to_string(h.fine.n_cells)).c_str(), "verdict");
  log << line;
  for (const auto& v : h.verdicts) {
    std::snprintf(line, sizeof line, "%-18s %16.8g %16.8g  %s%s%s\n", v.name.c_str(), v.coarse, v.fine,
                  v.pass ? "pass" : "FAIL", v.within_ceiling ? "" : " ceiling",
                  v.stable ? "" : " unstable");
    log << line;
  }
  log << "clamped cells: " << h.coarse.mixing.clamp_count << " / " << h.fine.mixing.clamp_count << '\n';
}

}  // namespace

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
  const VerifyResult v = execute_verify(cfg);
  const auto dir = prepare_dir(cfg.output_dir);
  json j = summary_head("verify", cfg, v.status, v.reason, v.detail);
  j["hypotheses"] = hypotheses_json(v.hypotheses);
  log_hypotheses(log, v.hypotheses);
  if (v.coarse) {
    write_run_files(dir, *v.coarse, "");
    j["run"] = run_json(*v.coarse);
  }
  if (v.fine) {
    write_run_files(dir, *v.fine, "_2x");
    j["run_2x"] = run_json(*v.fine);
  }
  json inv = json::array();
  for (const auto& c : v.invariants) {
    inv.push_back({{"name", c.name}, {"pass", c.pass}, {"coarse", to_json(c.coarse)}, {"fine", to_json(c.fine)}});
    log << (c.pass ? "  PASS " : "  FAIL ") << c.name << "  [" << c.coarse.detail << "] [" << c.fine.detail
        << "]\n";
  }
  j["checks"] = inv;
  write_summary(dir, j);
  log << "exit " << static_cast<int>(v.status) << " " << v.reason
      << (v.detail.empty() ? "" : " (" + v.detail + ")") << '\n';
  return static_cast<int>(v.status);
}

int cmd_hypotheses(const RunConfig& cfg, std::ostream& log) {
  const HypothesesReport h = execute_hypotheses(cfg);
  const ExitStatus status = h.pass ? ExitStatus::ok : ExitStatus::invariant_failure;
  const std::string reason = h.pass ? "ok" : "hypothesis_failure";
  const auto dir = prepare_dir(cfg.output_dir);
  json j = summary_head("hypotheses", cfg, status, reason, join(h.failed()));
  j["hypotheses"] = hypotheses_json(h);
  write_summary(dir, j);
  log_hypotheses(log, h);
  log << "exit " << static_cast<int>(status) << " " << reason << '\n';
  return static_cast<int>(status);
}

int dispatch(const std::string& command, const std::string& config_path, const CommandOptions& opt,
             std::ostream& log, std::ostream& err) {
  std::string out_dir = opt.out_dir;
  try {
    if (command != "run" && command != "sweep" && command != "verify" && command != "hypotheses")
      throw ConfigError("command", "unknown subcommand '" + command + "'");
    RunConfig cfg = apply_options(load_config(config_path), opt);
    out_dir = cfg.output_dir;
    if (command == "run") return cmd_run(cfg, log);
    if (command == "sweep") return cmd_sweep(cfg, log);
    if (command == "verify") return cmd_verify(cfg, log);
    return cmd_hypotheses(cfg, log);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    if (!out_dir.empty()) {
      try {
        const auto dir = prepare_dir(out_dir);
        json j{{"schema", "cdlab summary v1"},
               {"command", command},
               {"exit_code", static_cast<int>(ExitStatus::config_error)},
               {"exit_reason", "config_error"},
               {"key", e.key()},
               {"detail", e.what()}};
        write_summary(dir, j);
      } catch (const std::exception&) {
        // The status code still reports the config error.
      }
    }
    return static_cast<int>(ExitStatus::config_error);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitStatus::solver_failure);
  }
}

}  // namespace cdlab
