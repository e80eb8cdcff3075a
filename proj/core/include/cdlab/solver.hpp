#pragma once

// Explicit conservative finite-volume stepping of the eta-regularized system
//
//   d/dt rho_i = d/dx F_i + rho_i F_i(rho1, rho2),
//   F_i = eta d/dx rho_i + (1 - 2 eta) (rho_i / sigma) d/dx sigma + rho_i d/dx V_i,
//
// on the periodic grid. Fluxes live on faces; face i is the right face of cell i.

#include <array>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cdlab/mixing.hpp"
#include "cdlab/potentials.hpp"
#include "cdlab/reactions.hpp"
#include "cdlab/record.hpp"
#include "cdlab/torus.hpp"

namespace cdlab {

enum class FluxRatioRule { arithmetic, upwind };

struct SchemeConfig {
  double eta = 0.25;
  double cfl_safety = 0.4;
  double dt_max = std::numeric_limits<double>::infinity();
  int positivity_retry_limit = 40;
  FluxRatioRule flux_ratio_rule = FluxRatioRule::arithmetic;
  double t_end = 1.0;

  /// Throws DomainError naming the offending field.
  void validate() const;
};

struct FaceFluxes {
  GridField flux1;
  GridField flux2;
};

FaceFluxes species_flux(const SpeciesState& state, const PotentialPair& pair,
                        const SchemeConfig& cfg);

/// Largest dt allowed by the parabolic CFL bound, before any dt_max or snapshot cap.
double cfl_dt(const SpeciesState& state, const PotentialPair& pair, const SchemeConfig& cfg);

struct StepReport {
  double dt_used = 0.0;
  std::array<double, 2> mass_increment{};  // change of integral of rho_i over the step
  std::array<double, 2> reaction_mass{};   // dt * integral of rho_i F_i
  std::array<double, 2> mass_drift{};      // mass_increment - reaction_mass
  double min_density = 0.0;
  int retries = 0;
};

struct StepResult {
  SpeciesState state;
  StepReport report;
};

/// One forward-Euler step: dt = min(dt_max, dt_cap, cfl dt), halved on negativity.
StepResult step(const SpeciesState& state, const PotentialPair& pair, const SchemeConfig& cfg,
                const ReactionSpec* reactions = nullptr,
                double dt_cap = std::numeric_limits<double>::infinity());

/// Snapshots at t_k = k t_end / N plus everything observers attached along the way.
struct Trajectory {
  std::vector<SpeciesState> snapshots;
  std::vector<DiagnosticsRecord> records;
  std::size_t steps = 0;
  int total_retries = 0;
  double min_dt = std::numeric_limits<double>::infinity();
  double max_dt = 0.0;
  /// Largest per-step |mass increment - dt * reaction integral| over both species.
  double max_mass_drift = 0.0;
  /// Set when a step failed; snapshots up to that point are kept.
  std::exception_ptr error;
  std::string error_message;

  bool ok() const noexcept { return !error; }
  void rethrow_if_failed() const {
    if (error) std::rethrow_exception(error);
  }
  std::vector<double> times() const;
};

/// Called after each snapshot is appended; may append to trajectory.records.
using Observer = std::function<void(const SpeciesState&, Trajectory&)>;

Trajectory run(const SpeciesState& initial, const PotentialPair& pair, const SchemeConfig& cfg,
               const ReactionSpec* reactions, std::size_t snapshot_count,
               const std::vector<Observer>& observers = {});

struct TransformedRhs {
  GridField sigma_rhs;
  GridField f_rhs;
};

/// Discrete right-hand sides of the (sigma, f(r)) system on the current state.
/// Throws TransformUnavailableError when the state has clamped cells.
TransformedRhs transformed_rhs(const MixedState& mixed, const PotentialPair& pair,
                               const SchemeConfig& cfg, const ReactionSpec* reactions = nullptr);

}  // namespace cdlab
