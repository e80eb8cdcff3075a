#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cdlab/diagnostics.hpp"
#include "cdlab/mixing.hpp"
#include "cdlab/potentials.hpp"
#include "cdlab/reactions.hpp"
#include "cdlab/solver.hpp"

namespace cdlab {

struct PotentialConfig {
  PotentialKind kind = PotentialKind::zero;
  std::vector<CosineTerm> terms;
  std::string csv;  // tabulated: path of an (x, value) CSV
};

struct InitialConfig {
  InitialFamily family = InitialFamily::uniform;
  double a1 = 0.0;
  double a2 = 0.0;
  int k1 = 1;
  int k2 = 1;
  double phase = 0.0;
  double vacuum_exponent = 1.0 / 3.0;
  double noise = 0.0;
  std::string rho1_csv;
  std::string rho2_csv;
};

struct ReactionFunctionConfig {
  std::string kind = "zero";  // zero | logistic | tabulated_bilinear
  double a = 1.0;
  double b = 1.0;
  double rho1_max = 1.0;
  double rho2_max = 1.0;
  std::size_t n1 = 2;
  std::size_t n2 = 2;
  std::vector<double> values;
};

struct ReactionConfig {
  bool enabled = false;
  ReactionFunctionConfig f1;
  ReactionFunctionConfig f2;
};

struct ChecksConfig {
  CheckOptions options;
  double sobolev_ceiling = 1e6;
  MixingCeilings mixing;
  /// A quantity is refinement-stable when |q(2n)| <= growth_limit |q(n)|.
  double growth_limit = 1.5;
};

enum class SweepNorm { L1_final, L2L1_trajectory };

struct SweepSettings {
  std::vector<double> etas;  // empty: default ladder 1/2 * 2^-j, j = 0..6
  SweepNorm norm = SweepNorm::L1_final;
  double cauchy_ratio = 0.9;

  std::vector<double> ladder() const;
};

/// Complete description of one experiment.
struct RunConfig {
  std::size_t n_cells = 256;
  double t_end = 0.1;
  std::size_t snapshots = 20;
  SchemeConfig scheme;
  InitialConfig initial;
  PotentialConfig v1;
  PotentialConfig v2;
  ReactionConfig reaction;
  ChecksConfig checks;
  SweepSettings sweep;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  /// Directory that relative CSV paths are resolved against.
  std::string base_dir = ".";

  /// Throws ConfigError with the dotted key of the first invalid entry.
  void validate() const;
  /// Copy with n_cells multiplied by `factor`.
  RunConfig refined(std::size_t factor) const;
};

/// Parses and validates TOML text. Unknown keys are rejected.
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

Grid make_grid(const RunConfig& cfg);
PotentialPair make_potentials(const RunConfig& cfg, const Grid& grid);
SpeciesState make_initial_state(const RunConfig& cfg, const Grid& grid);
std::optional<ReactionSpec> make_reactions(const RunConfig& cfg);

const char* to_string(InitialFamily f);
const char* to_string(PotentialKind k);
const char* to_string(FluxRatioRule r);
const char* to_string(SweepNorm n);

}  // namespace cdlab
