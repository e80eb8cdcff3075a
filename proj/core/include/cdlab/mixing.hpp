#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cdlab/potentials.hpp"
#include "cdlab/torus.hpp"

namespace cdlab {

/// Densities below this are treated as vacuum when a logarithm or ratio is needed.
inline constexpr double kDensityFloor = 1e-300;
/// The ratio r is clamped into [delta, 1 - delta] before f(r) is evaluated.
inline constexpr double kRatioClamp = 1e-12;
/// Clamped fraction above which a state is reported as leaving the total-mixing regime.
inline constexpr double kSegregationFraction = 0.05;

struct SpeciesState {
  GridField rho1;
  GridField rho2;
  double time = 0.0;

  const Grid& grid() const noexcept { return rho1.grid(); }
  GridField sigma() const { return rho1 + rho2; }
  SpeciesState swapped() const { return {rho2, rho1, time}; }
};

/// Transformed variables sigma, r, f(r) = log(r / (1 - r)) and u = f(r) + V1 - V2.
struct MixedState {
  GridField sigma;
  GridField ratio;
  GridField f_ratio;
  GridField u_field;
  std::vector<bool> clamped;     // per cell: vacuum substitution or ratio clamp applied
  std::size_t clamp_count = 0;

  const Grid& grid() const noexcept { return sigma.grid(); }
  bool segregation_warning() const noexcept {
    return static_cast<double>(clamp_count) > kSegregationFraction * static_cast<double>(sigma.size());
  }
};

/// Ratio clamp and vacuum handling: vacuum cells (sigma < kDensityFloor) take the ratio of
/// the nearest non-vacuum cell; all ratios are clamped into [kRatioClamp, 1 - kRatioClamp].
MixedState to_mixed(const SpeciesState& state);
/// Same, with u = f(r) + V1 - V2 from the sampled potentials.
MixedState to_mixed(const SpeciesState& state, const PotentialPair& pair);

/// rho1 = r sigma, rho2 = (1 - r) sigma.
SpeciesState from_mixed(const MixedState& mixed, double time);

/// f(r) = log(r) - log(1 - r).
double f_of_ratio(double r);
/// f'(r) = 1 / (r (1 - r)); throws DomainError outside (0, 1).
double f_prime(double r);

enum class InitialFamily { uniform, figure1, cosine_mix, tabulated };

/// Parameters of an initial-data family.
///
/// figure1:    rho_i ~ g(x) (1 - a_i sin(k_i pi x)),  g(x) = x (1 - x) / |x - 1/2|^p
/// cosine_mix: rho1 ~ 1 + a1 cos(2 pi k1 x + phase),  rho2 ~ 1 + a2 cos(2 pi k2 x)
/// tabulated:  rho1, rho2 given as grid samples.
/// Every family is mass-normalized to 1 per species.
struct InitialSpec {
  InitialFamily family = InitialFamily::uniform;
  double a1 = 0.0;
  double a2 = 0.0;
  int k1 = 1;
  int k2 = 1;
  double phase = 0.0;
  double vacuum_exponent = 1.0 / 3.0;
  /// Multiplicative uniform noise amplitude in [0, 1), drawn from `seed`.
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::optional<GridField> rho1_samples;
  std::optional<GridField> rho2_samples;
};

SpeciesState make_initial(const InitialSpec& spec, const Grid& grid);

struct MixingCeilings {
  double llogl_ceiling = 1e6;
  double tv_ceiling = 1e6;
  double mixing_ceiling = 25.0;  // sup |f(r)|; log(1/kRatioClamp) ~ 27.6 is the clamp wall
};

struct MixingHypothesisReport {
  double llogl = 0.0;         // integral of sigma log sigma, 0 log 0 := 0
  double tv_logratio = 0.0;   // TV of f(r) over non-clamped cells
  double mixing_bound = 0.0;  // sup |f(r)|
  std::size_t clamp_count = 0;
  bool h1_pass = true;
  bool h2_pass = true;
  bool pass = true;
};

MixingHypothesisReport check_h1_h2(const SpeciesState& state, MixingCeilings ceilings = {});

/// x log x with 0 log 0 := 0.
double xlogx(double x);

}  // namespace cdlab
