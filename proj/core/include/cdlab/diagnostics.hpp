#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cdlab/mixing.hpp"
#include "cdlab/potentials.hpp"
#include "cdlab/record.hpp"
#include "cdlab/solver.hpp"

namespace cdlab {

struct FirstOrderEnergy {
  double value = 0.0;
  std::size_t excluded_cells = 0;
  bool reliable = true;  // false when more than 5% of the cells had to be excluded
};

/// Quadrature of |periodic_diff(f(r)) + V|, skipping cells whose stencil touches a clamped cell.
FirstOrderEnergy first_order_energy(const MixedState& mixed, const PotentialPair& pair);

/// (e0 + alpha s) exp(beta s).
double gronwall_envelope(double e0, const GronwallConstants& constants, double s);

/// Integral of (1-2 eta) sigma log sigma + eta rho_i log rho_i + V_i rho_i, with 0 log 0 := 0.
double entropy_eta(const SpeciesState& state, const PotentialPair& pair, double eta);

/// (||rho_1||_{L^1} + TV(rho_1), ||rho_2||_{L^1} + TV(rho_2)).
std::pair<double, double> species_bv(const SpeciesState& state);

/// ||sqrt(sigma)||_{H^1}^2 = integral of sigma + |d/dx sqrt(sigma)|^2.
double sqrt_sigma_h1_squared(const SpeciesState& state);

/// Trapezoid-in-time integral of ||sqrt(sigma)||_{H^1}^2 over the snapshots.
double sqrt_sigma_dissipation(const Trajectory& trajectory);

enum class TimeProfile {
  /// psi(t) = (1 - t/T)^2 (1 + 2 t/T): psi(0) = 1, psi(T) = psi'(T) = 0.
  hermite_bump,
};

enum class SpatialMode { cosine, sine };

/// Test function phi(t, x) = psi(t) trig(2 pi k x); k = 0 means constant in space.
struct WeakTestFunction {
  TimeProfile profile = TimeProfile::hermite_bump;
  int wavenumber = 1;
  SpatialMode mode = SpatialMode::cosine;
};

struct WeakResidual {
  WeakTestFunction test;
  double species1 = 0.0;
  double species2 = 0.0;
};

/// Absolute defect of the weak formulation of the eta-regularized system, per test function
/// and species, by space-time quadrature over the snapshots. Needs >= 16 uniformly spaced
/// snapshot intervals.
std::vector<WeakResidual> weak_residual(const Trajectory& trajectory, const PotentialPair& pair,
                                        double eta, const std::vector<WeakTestFunction>& tests);

/// State carried between snapshots by the recorder.
struct RecorderState {
  double e0 = 0.0;
  GronwallConstants constants;
  bool started = false;
  double prev_time = 0.0;
  double prev_h1sq = 0.0;
  double cumulative_h1sq = 0.0;
};

DiagnosticsRecord record(const SpeciesState& state, const MixedState& mixed,
                         const PotentialPair& pair, const SchemeConfig& cfg, RecorderState& running);

/// Observer appending one DiagnosticsRecord per snapshot to the trajectory.
Observer make_recorder(const PotentialPair& pair, const SchemeConfig& cfg);

/// Tolerances of the runtime invariant checks.
struct CheckOptions {
  double mass_tolerance = 1e-10;
  double gronwall_slack = 1.1;
  double entropy_tolerance_factor = 10.0;  // per-step allowance factor * dt * dx
  bool reactions = false;
};

struct CheckResult {
  std::string name;
  bool pass = true;
  double worst = 0.0;  // worst observed margin statistic (check-specific)
  std::string detail;
};

CheckResult check_mass(const std::vector<DiagnosticsRecord>& records, const CheckOptions& opt);
CheckResult check_positivity(const std::vector<DiagnosticsRecord>& records);
CheckResult check_gronwall(const std::vector<DiagnosticsRecord>& records, const CheckOptions& opt);
CheckResult check_tv_ordering(const std::vector<DiagnosticsRecord>& records);
CheckResult check_entropy_decay(const std::vector<DiagnosticsRecord>& records, double dx,
                                const CheckOptions& opt);
CheckResult check_envelope_monotone(const std::vector<DiagnosticsRecord>& records);
/// BV(rho_i) <= ||sigma||_inf TV(r_i) + TV(sigma) + ||rho_i||_{L^1} on every snapshot.
CheckResult check_species_bv_bound(const Trajectory& trajectory);

/// Every check applicable to the trajectory (mass and entropy only without reactions).
std::vector<CheckResult> check_invariants(const Trajectory& trajectory, double dx,
                                          const CheckOptions& opt);

}  // namespace cdlab
