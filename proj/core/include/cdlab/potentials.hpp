#pragma once

#include <optional>
#include <vector>

#include "cdlab/torus.hpp"

namespace cdlab {

/// One term a * cos(2 pi k x + phase).
struct CosineTerm {
  double amplitude = 0.0;
  int wavenumber = 1;
  double phase = 0.0;
};

enum class PotentialKind { zero, cosine_sum, tabulated };

/// Description of a fixed potential V(x) on the torus.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::zero;
  std::vector<CosineTerm> terms;       // cosine_sum
  std::optional<GridField> samples;    // tabulated

  static PotentialSpec zero() { return {}; }
  static PotentialSpec cosine(std::vector<CosineTerm> terms);
  static PotentialSpec tabulated(GridField samples);

  /// Exact value of the j-th derivative for cosine_sum (j = 0..3). Zero kind returns 0.
  double analytic(double x, int derivative) const;
  bool has_analytic_derivatives() const noexcept { return kind != PotentialKind::tabulated; }
};

/// Sampled potentials with the derived drift fields V = d/dx(V1 - V2), W = d/dx V2.
///
/// Cell-centered fields are indexed by cell; the *_face fields are indexed by the
/// right face of each cell (face i lies between cells i and i+1).
struct PotentialPair {
  PotentialSpec spec1;
  PotentialSpec spec2;
  GridField v1, v2;
  GridField v1_x, v2_x;
  GridField v1_x_face, v2_x_face;
  GridField V, W, V_x;

  const Grid& grid() const noexcept { return v1.grid(); }
  /// Same potentials resampled on another grid (tabulated specs must already match it).
  PotentialPair on_grid(const Grid& grid) const;
  /// Pair with the two species' roles exchanged.
  PotentialPair swapped() const;
};

PotentialPair build_pair(const PotentialSpec& spec1, const PotentialSpec& spec2, const Grid& grid);

struct HypothesisCeilings {
  double sobolev_ceiling = 1e6;
};

struct PotentialHypothesisReport {
  double h3_v1 = 0.0;  // ||V1||_{W^{2,1}}
  double h3_v2 = 0.0;  // ||V2||_{W^{2,1}}
  double h4 = 0.0;     // ||V1 - V2||_{W^{3,1}}
  bool pass = true;
};

PotentialHypothesisReport check_h3_h4(const PotentialPair& pair, HypothesisCeilings ceilings = {});

struct GronwallConstants {
  double alpha = 0.0;
  double beta = 0.0;
};

/// alpha = ||V||_{W^{2,1}} + ||VW||_{W^{1,1}} + ||V^2||_{W^{1,1}} + ||V^2||_inf ||V||_{L^1},
/// beta  = ||V^2||_inf, all from discrete norms of the sampled products.
GronwallConstants gronwall_constants(const PotentialPair& pair);

}  // namespace cdlab
