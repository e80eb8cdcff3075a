#pragma once

// Reference values computed independently of the library: closed forms and brute-force
// quadrature of analytic functions.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Composite 5-point Gauss-Legendre rule on [a, b] with m panels.
inline double gauss_legendre(const std::function<double(double)>& f, double a, double b, int m = 4096) {
  static const double x[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                              0.9061798459386640};
  static const double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                              0.2369268850561891, 0.2369268850561891};
  const double h = (b - a) / m;
  double s = 0.0;
  for (int p = 0; p < m; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int q = 0; q < 5; ++q) s += w[q] * f(mid + 0.5 * h * x[q]);
  }
  return 0.5 * h * s;
}

/// sigma(t, x) = 2 + exp(-4 pi^2 (1 - eta) t) cos(2 pi x): total density of two species with
/// equal mass-1 profiles 1 + cos(2 pi x) / 2 under zero potentials.
inline double heat_sigma(double t, double x, double eta) {
  return 2.0 + std::exp(-4.0 * pi * pi * (1.0 - eta) * t) * std::cos(2.0 * pi * x);
}

/// Total variation of samples including the periodic wrap, written out independently.
inline double cyclic_tv(const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += std::fabs(v[(i + 1) % v.size()] - v[i]);
  return s;
}

/// Observed order from errors at grids n and 2n.
inline double observed_order(double e_coarse, double e_fine) { return std::log2(e_coarse / e_fine); }

}  // namespace oracle
