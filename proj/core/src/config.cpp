#include "cdlab/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cdlab/csv_io.hpp"
#include "cdlab/errors.hpp"
#include "cdlab/toml_lite.hpp"

namespace cdlab {

namespace {

// Typed access to the flat TOML map; every key read is marked so leftovers can be rejected.
class Reader {
 public:
  explicit Reader(const toml::Document& doc) : doc_(doc) {}

  const toml::Value* get(const std::string& key) {
    const toml::Value* v = doc_.find(key);
    if (v != nullptr) used_.insert(key);
    return v;
  }

  void number(const std::string& key, double& out) {
    if (const auto* v = get(key)) out = as_number(key, *v);
  }

  template <typename Int>
  void integer(const std::string& key, Int& out, std::int64_t lo) {
    if (const auto* v = get(key)) {
      if (!v->is_int()) throw ConfigError(key, "expected an integer, got " + v->type_name());
      const auto i = std::get<std::int64_t>(v->data);
      if (i < lo) throw ConfigError(key, "must be >= " + std::to_string(lo));
      out = static_cast<Int>(i);
    }
  }

  void string(const std::string& key, std::string& out) {
    if (const auto* v = get(key)) {
      if (!v->is_string()) throw ConfigError(key, "expected a string, got " + v->type_name());
      out = std::get<std::string>(v->data);
    }
  }

  bool numbers(const std::string& key, std::vector<double>& out) {
    const auto* v = get(key);
    if (v == nullptr) return false;
    if (!v->is_array()) throw ConfigError(key, "expected an array, got " + v->type_name());
    out.clear();
    for (const auto& e : std::get<toml::Array>(v->data)) out.push_back(as_number(key, e));
    return true;
  }

  bool has_table(const std::string& prefix) const {
    for (const auto& t : doc_.tables) {
      if (t == prefix || t.rfind(prefix + ".", 0) == 0) return true;
    }
    for (const auto& [k, v] : doc_.entries) {
      if (k.rfind(prefix + ".", 0) == 0) return true;
    }
    return false;
  }

  void reject_unknown() const {
    for (const auto& [k, v] : doc_.entries) {
      if (used_.count(k) == 0) throw ConfigError(k, "unknown key");
    }
  }

 private:
  static double as_number(const std::string& key, const toml::Value& v) {
    if (v.is_float()) return std::get<double>(v.data);
    if (v.is_int()) return static_cast<double>(std::get<std::int64_t>(v.data));
    throw ConfigError(key, "expected a number, got " + v.type_name());
  }

  const toml::Document& doc_;
  std::set<std::string> used_;
};

InitialFamily parse_family(const std::string& key, const std::string& s) {
  if (s == "uniform") return InitialFamily::uniform;
  if (s == "figure1") return InitialFamily::figure1;
  if (s == "cosine_mix") return InitialFamily::cosine_mix;
  if (s == "tabulated") return InitialFamily::tabulated;
  throw ConfigError(key, "unknown family '" + s + "' (uniform, figure1, cosine_mix, tabulated)");
}

PotentialKind parse_potential_kind(const std::string& key, const std::string& s) {
  if (s == "zero") return PotentialKind::zero;
  if (s == "cosine" || s == "cosine_sum") return PotentialKind::cosine_sum;
  if (s == "tabulated") return PotentialKind::tabulated;
  throw ConfigError(key, "unknown potential kind '" + s + "' (zero, cosine, tabulated)");
}

void read_potential(Reader& rd, const std::string& base, PotentialConfig& out) {
  std::string kind = "zero";
  rd.string(base + ".kind", kind);
  out.kind = parse_potential_kind(base + ".kind", kind);
  std::vector<double> amps, waves, phases;
  const bool has_a = rd.numbers(base + ".amplitudes", amps);
  const bool has_k = rd.numbers(base + ".wavenumbers", waves);
  const bool has_p = rd.numbers(base + ".phases", phases);
  rd.string(base + ".csv", out.csv);
  if (out.kind == PotentialKind::cosine_sum) {
    if (!has_a) throw ConfigError(base + ".amplitudes", "required for kind = \"cosine\"");
    if (!has_k) waves.assign(amps.size(), 1.0);
    if (!has_p) phases.assign(amps.size(), 0.0);
    if (waves.size() != amps.size())
      throw ConfigError(base + ".wavenumbers", "length must match amplitudes");
    if (phases.size() != amps.size())
      throw ConfigError(base + ".phases", "length must match amplitudes");
    out.terms.clear();
    for (std::size_t i = 0; i < amps.size(); ++i) {
      if (waves[i] != std::floor(waves[i]) || waves[i] < 1.0)
        throw ConfigError(base + ".wavenumbers", "entries must be positive integers");
      out.terms.push_back({amps[i], static_cast<int>(waves[i]), phases[i]});
    }
  } else if (has_a || has_k || has_p) {
    throw ConfigError(has_a ? base + ".amplitudes" : has_k ? base + ".wavenumbers" : base + ".phases",
                      "only valid for kind = \"cosine\"");
  }
  if (out.kind == PotentialKind::tabulated && out.csv.empty())
    throw ConfigError(base + ".csv", "required for kind = \"tabulated\"");
  if (out.kind != PotentialKind::tabulated && !out.csv.empty())
    throw ConfigError(base + ".csv", "only valid for kind = \"tabulated\"");
}

void read_reaction(Reader& rd, const std::string& base, ReactionFunctionConfig& out) {
  rd.string(base + ".kind", out.kind);
  rd.number(base + ".a", out.a);
  rd.number(base + ".b", out.b);
  rd.number(base + ".rho1_max", out.rho1_max);
  rd.number(base + ".rho2_max", out.rho2_max);
  rd.integer(base + ".n1", out.n1, 2);
  rd.integer(base + ".n2", out.n2, 2);
  rd.numbers(base + ".values", out.values);
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

void validate_csv(const std::string& base_dir, const std::string& path, const std::string& key) {
  try {
    (void)csv::read_xy(resolve(base_dir, path));
  } catch (const Error& e) {
    throw ConfigError(key, e.what());
  }
}

void validate_reaction(const ReactionFunctionConfig& r, const std::string& base) {
  if (r.kind == "zero") return;
  if (r.kind == "logistic") {
    require(std::isfinite(r.a), base + ".a", "must be finite");
    require(finite_positive(r.b), base + ".b", "must be positive");
    return;
  }
  if (r.kind == "tabulated_bilinear") {
    require(finite_positive(r.rho1_max), base + ".rho1_max", "must be positive");
    require(finite_positive(r.rho2_max), base + ".rho2_max", "must be positive");
    require(r.values.size() == r.n1 * r.n2, base + ".values", "needs n1 * n2 entries");
    for (double v : r.values) require(std::isfinite(v), base + ".values", "entries must be finite");
    return;
  }
  throw ConfigError(base + ".kind", "unknown reaction kind '" + r.kind +
                                        "' (zero, logistic, tabulated_bilinear)");
}

ReactionFunction make_function(const ReactionFunctionConfig& r) {
  if (r.kind == "logistic") return ReactionFunction(LogisticReaction{r.a, r.b});
  if (r.kind == "tabulated_bilinear")
    return ReactionFunction(BilinearReaction{r.rho1_max, r.rho2_max, r.n1, r.n2, r.values});
  return ReactionFunction(ZeroReaction{});
}

PotentialSpec make_spec(const PotentialConfig& p, const std::string& base_dir, const Grid& grid) {
  switch (p.kind) {
    case PotentialKind::zero: return PotentialSpec::zero();
    case PotentialKind::cosine_sum: return PotentialSpec::cosine(p.terms);
    case PotentialKind::tabulated:
      return PotentialSpec::tabulated(csv::resample_periodic(csv::read_xy(resolve(base_dir, p.csv)), grid));
  }
  return PotentialSpec::zero();
}

}  // namespace

std::vector<double> SweepSettings::ladder() const {
  if (!etas.empty()) return etas;
  std::vector<double> out;
  for (int j = 0; j <= 6; ++j) out.push_back(0.5 * std::ldexp(1.0, -j));
  return out;
}

void RunConfig::validate() const {
  require(n_cells >= Grid::kMinCells, "grid.n_cells", "must be >= " + std::to_string(Grid::kMinCells));
  require(std::isfinite(t_end) && t_end >= 0.0, "time.t_end", "must be finite and >= 0");
  require(snapshots >= 1, "time.snapshots", "must be >= 1");

  require(std::isfinite(scheme.eta) && scheme.eta > 0.0 && scheme.eta <= 0.5, "scheme.eta",
          "must lie in (0, 1/2]");
  require(std::isfinite(scheme.cfl_safety) && scheme.cfl_safety > 0.0 && scheme.cfl_safety < 1.0,
          "scheme.cfl_safety", "must lie in (0, 1)");
  require(scheme.dt_max > 0.0 && !std::isnan(scheme.dt_max), "scheme.dt_max", "must be positive");
  require(scheme.positivity_retry_limit >= 0, "scheme.positivity_retry_limit", "must be >= 0");

  const auto amp_ok = [](double a) { return std::isfinite(a) && std::fabs(a) < 1.0; };
  require(amp_ok(initial.a1), "initial.a1", "must satisfy |a1| < 1");
  require(amp_ok(initial.a2), "initial.a2", "must satisfy |a2| < 1");
  require(initial.k1 >= 1, "initial.k1", "must be >= 1");
  require(initial.k2 >= 1, "initial.k2", "must be >= 1");
  require(std::isfinite(initial.phase), "initial.phase", "must be finite");
  require(std::isfinite(initial.vacuum_exponent) && initial.vacuum_exponent >= 0.0 &&
              initial.vacuum_exponent < 1.0,
          "initial.vacuum_exponent", "must lie in [0, 1)");
  require(std::isfinite(initial.noise) && initial.noise >= 0.0 && initial.noise < 1.0,
          "initial.noise", "must lie in [0, 1)");
  if (initial.family == InitialFamily::tabulated) {
    require(!initial.rho1_csv.empty(), "initial.rho1_csv", "required for family = \"tabulated\"");
    require(!initial.rho2_csv.empty(), "initial.rho2_csv", "required for family = \"tabulated\"");
    validate_csv(base_dir, initial.rho1_csv, "initial.rho1_csv");
    validate_csv(base_dir, initial.rho2_csv, "initial.rho2_csv");
  } else {
    require(initial.rho1_csv.empty(), "initial.rho1_csv", "only valid for family = \"tabulated\"");
    require(initial.rho2_csv.empty(), "initial.rho2_csv", "only valid for family = \"tabulated\"");
  }

  for (const auto& [p, base] : {std::pair{&v1, "potential.v1"}, std::pair{&v2, "potential.v2"}}) {
    for (const auto& t : p->terms) {
      require(std::isfinite(t.amplitude), std::string(base) + ".amplitudes", "must be finite");
      require(std::isfinite(t.phase), std::string(base) + ".phases", "must be finite");
    }
    if (p->kind == PotentialKind::tabulated) validate_csv(base_dir, p->csv, std::string(base) + ".csv");
  }

  if (reaction.enabled) {
    validate_reaction(reaction.f1, "reaction.f1");
    validate_reaction(reaction.f2, "reaction.f2");
  }

  const auto& c = checks;
  require(finite_positive(c.options.mass_tolerance), "checks.mass_tolerance", "must be positive");
  require(std::isfinite(c.options.gronwall_slack) && c.options.gronwall_slack >= 1.0,
          "checks.gronwall_slack", "must be >= 1");
  require(std::isfinite(c.options.entropy_tolerance_factor) && c.options.entropy_tolerance_factor >= 0.0,
          "checks.entropy_tolerance_factor", "must be >= 0");
  require(finite_positive(c.sobolev_ceiling), "checks.sobolev_ceiling", "must be positive");
  require(finite_positive(c.mixing.llogl_ceiling), "checks.llogl_ceiling", "must be positive");
  require(finite_positive(c.mixing.tv_ceiling), "checks.tv_ceiling", "must be positive");
  require(finite_positive(c.mixing.mixing_ceiling), "checks.mixing_ceiling", "must be positive");
  require(std::isfinite(c.growth_limit) && c.growth_limit >= 1.0, "checks.growth_limit", "must be >= 1");

  const auto ladder = sweep.ladder();
  require(ladder.size() >= 3, "sweep.etas", "needs at least 3 rungs");
  for (std::size_t j = 0; j < ladder.size(); ++j) {
    require(std::isfinite(ladder[j]) && ladder[j] > 0.0 && ladder[j] <= 0.5, "sweep.etas",
            "entries must lie in (0, 1/2]");
    if (j > 0) require(ladder[j] < ladder[j - 1], "sweep.etas", "must be strictly decreasing");
  }
  require(std::isfinite(sweep.cauchy_ratio) && sweep.cauchy_ratio > 0.0, "sweep.cauchy_ratio",
          "must be positive");
  require(!output_dir.empty(), "output.dir", "must not be empty");
}

RunConfig RunConfig::refined(std::size_t factor) const {
  if (factor < 1) throw ConfigError("resolution-factor", "must be >= 1");
  RunConfig out = *this;
  out.n_cells = n_cells * factor;
  return out;
}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  toml::Document doc;
  try {
    doc = toml::parse(text);
  } catch (const toml::ParseError& e) {
    throw ConfigError("<syntax>", e.what());
  }
  Reader rd(doc);
  RunConfig cfg;
  cfg.base_dir = base_dir;

  rd.integer("grid.n_cells", cfg.n_cells, 1);
  rd.number("time.t_end", cfg.t_end);
  rd.integer("time.snapshots", cfg.snapshots, 1);

  rd.number("scheme.eta", cfg.scheme.eta);
  rd.number("scheme.cfl_safety", cfg.scheme.cfl_safety);
  rd.number("scheme.dt_max", cfg.scheme.dt_max);
  rd.integer("scheme.positivity_retry_limit", cfg.scheme.positivity_retry_limit, 0);
  std::string rule = "arithmetic";
  rd.string("scheme.flux_ratio_rule", rule);
  if (rule == "arithmetic") {
    cfg.scheme.flux_ratio_rule = FluxRatioRule::arithmetic;
  } else if (rule == "upwind") {
    cfg.scheme.flux_ratio_rule = FluxRatioRule::upwind;
  } else {
    throw ConfigError("scheme.flux_ratio_rule", "unknown rule '" + rule + "' (arithmetic, upwind)");
  }

  std::string family = "uniform";
  rd.string("initial.family", family);
  cfg.initial.family = parse_family("initial.family", family);
  rd.number("initial.a1", cfg.initial.a1);
  rd.number("initial.a2", cfg.initial.a2);
  rd.integer("initial.k1", cfg.initial.k1, 1);
  rd.integer("initial.k2", cfg.initial.k2, 1);
  rd.number("initial.phase", cfg.initial.phase);
  rd.number("initial.vacuum_exponent", cfg.initial.vacuum_exponent);
  rd.number("initial.noise", cfg.initial.noise);
  rd.string("initial.rho1_csv", cfg.initial.rho1_csv);
  rd.string("initial.rho2_csv", cfg.initial.rho2_csv);

  read_potential(rd, "potential.v1", cfg.v1);
  read_potential(rd, "potential.v2", cfg.v2);

  if (rd.has_table("reaction")) {
    cfg.reaction.enabled = true;
    rd.get("reaction.enabled");
    if (const auto* en = doc.find("reaction.enabled")) {
      if (!en->is_bool()) throw ConfigError("reaction.enabled", "expected a boolean");
      cfg.reaction.enabled = std::get<bool>(en->data);
    }
    read_reaction(rd, "reaction.f1", cfg.reaction.f1);
    read_reaction(rd, "reaction.f2", cfg.reaction.f2);
  }

  auto& c = cfg.checks;
  rd.number("checks.mass_tolerance", c.options.mass_tolerance);
  rd.number("checks.gronwall_slack", c.options.gronwall_slack);
  rd.number("checks.entropy_tolerance_factor", c.options.entropy_tolerance_factor);
  rd.number("checks.sobolev_ceiling", c.sobolev_ceiling);
  rd.number("checks.llogl_ceiling", c.mixing.llogl_ceiling);
  rd.number("checks.tv_ceiling", c.mixing.tv_ceiling);
  rd.number("checks.mixing_ceiling", c.mixing.mixing_ceiling);
  rd.number("checks.growth_limit", c.growth_limit);

  rd.numbers("sweep.etas", cfg.sweep.etas);
  std::string norm = "L1_final";
  rd.string("sweep.norm", norm);
  if (norm == "L1_final") {
    cfg.sweep.norm = SweepNorm::L1_final;
  } else if (norm == "L2L1_trajectory") {
    cfg.sweep.norm = SweepNorm::L2L1_trajectory;
  } else {
    throw ConfigError("sweep.norm", "unknown norm '" + norm + "' (L1_final, L2L1_trajectory)");
  }
  rd.number("sweep.cauchy_ratio", cfg.sweep.cauchy_ratio);

  rd.string("output.dir", cfg.output_dir);
  if (const auto* s = rd.get("seed")) {
    if (!s->is_int() || std::get<std::int64_t>(s->data) < 0)
      throw ConfigError("seed", "expected a non-negative integer");
    cfg.seed = static_cast<std::uint64_t>(std::get<std::int64_t>(s->data));
  }

  rd.reject_unknown();
  cfg.checks.options.reactions = cfg.reaction.enabled;
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const auto parent = std::filesystem::path(path).parent_path();
  return parse_config(ss.str(), parent.empty() ? "." : parent.string());
}

Grid make_grid(const RunConfig& cfg) { return Grid(cfg.n_cells); }

PotentialPair make_potentials(const RunConfig& cfg, const Grid& grid) {
  return build_pair(make_spec(cfg.v1, cfg.base_dir, grid), make_spec(cfg.v2, cfg.base_dir, grid), grid);
}

SpeciesState make_initial_state(const RunConfig& cfg, const Grid& grid) {
  InitialSpec spec;
  spec.family = cfg.initial.family;
  spec.a1 = cfg.initial.a1;
  spec.a2 = cfg.initial.a2;
  spec.k1 = cfg.initial.k1;
  spec.k2 = cfg.initial.k2;
  spec.phase = cfg.initial.phase;
  spec.vacuum_exponent = cfg.initial.vacuum_exponent;
  spec.noise = cfg.initial.noise;
  spec.seed = cfg.seed;
  if (spec.family == InitialFamily::tabulated) {
    spec.rho1_samples = csv::resample_periodic(csv::read_xy(resolve(cfg.base_dir, cfg.initial.rho1_csv)), grid);
    spec.rho2_samples = csv::resample_periodic(csv::read_xy(resolve(cfg.base_dir, cfg.initial.rho2_csv)), grid);
  }
  return make_initial(spec, grid);
}

std::optional<ReactionSpec> make_reactions(const RunConfig& cfg) {
  if (!cfg.reaction.enabled) return std::nullopt;
  return ReactionSpec::make(make_function(cfg.reaction.f1), make_function(cfg.reaction.f2));
}

const char* to_string(InitialFamily f) {
  switch (f) {
    case InitialFamily::uniform: return "uniform";
    case InitialFamily::figure1: return "figure1";
    case InitialFamily::cosine_mix: return "cosine_mix";
    case InitialFamily::tabulated: return "tabulated";
  }
  return "?";
}

const char* to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::zero: return "zero";
    case PotentialKind::cosine_sum: return "cosine";
    case PotentialKind::tabulated: return "tabulated";
  }
  return "?";
}

const char* to_string(FluxRatioRule r) {
  return r == FluxRatioRule::arithmetic ? "arithmetic" : "upwind";
}

const char* to_string(SweepNorm n) {
  return n == SweepNorm::L1_final ? "L1_final" : "L2L1_trajectory";
}

}  // namespace cdlab
