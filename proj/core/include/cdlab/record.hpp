#pragma once

#include <cstddef>

namespace cdlab {

/// Scalar monitors taken at one snapshot.
struct DiagnosticsRecord {
  double time = 0.0;
  double mass1 = 0.0;
  double mass2 = 0.0;
  double first_order_energy = 0.0;  // integral of |d/dx f(r) + V|
  double gronwall_envelope = 0.0;   // (e0 + alpha t) exp(beta t)
  double entropy_eta = 0.0;
  double llogl = 0.0;
  double tv_r = 0.0;
  double tv_f = 0.0;
  double bv_rho1 = 0.0;
  double bv_rho2 = 0.0;
  double sqrt_sigma_h1_cum = 0.0;   // running time integral of ||sqrt(sigma)||_{H^1}^2
  double min_density = 0.0;
  std::size_t clamp_count = 0;
  bool energy_reliable = true;
};

}  // namespace cdlab
