#include "cdlab/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "cdlab/errors.hpp"

namespace cdlab {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

double f_of_ratio(double r) { return std::log(r) - std::log(1.0 - r); }

double f_prime(double r) {
  if (!(r > 0.0 && r < 1.0)) {
    throw DomainError("f'(r) is defined for r in (0,1), got " + std::to_string(r));
  }
  return 1.0 / (r * (1.0 - r));
}

namespace {

MixedState build_mixed(const SpeciesState& state, const GridField* v1_minus_v2) {
  const Grid& grid = state.grid();
  const std::size_t n = grid.size();
  const auto rho1 = state.rho1.values();
  const auto rho2 = state.rho2.values();

  std::vector<double> sigma(n), ratio(n), f(n);
  std::vector<bool> vacuum(n), clamped(n, false);
  std::size_t non_vacuum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sigma[i] = rho1[i] + rho2[i];
    vacuum[i] = sigma[i] < kDensityFloor;
    if (!vacuum[i]) {
      ratio[i] = rho1[i] / sigma[i];
      ++non_vacuum;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!vacuum[i]) continue;
    clamped[i] = true;
    double r = 0.5;
    if (non_vacuum > 0) {
      for (std::size_t d = 1; d < n; ++d) {
        const std::size_t left = (i + n - d % n) % n;
        const std::size_t right = (i + d) % n;
        if (!vacuum[left]) { r = ratio[left]; break; }
        if (!vacuum[right]) { r = ratio[right]; break; }
      }
    }
    ratio[i] = r;
  }

  std::size_t clamp_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::clamp(ratio[i], kRatioClamp, 1.0 - kRatioClamp);
    if (r != ratio[i]) clamped[i] = true;
    ratio[i] = r;
    f[i] = f_of_ratio(r);
    if (clamped[i]) ++clamp_count;
  }

  std::vector<double> u = f;
  if (v1_minus_v2 != nullptr) {
    for (std::size_t i = 0; i < n; ++i) u[i] += (*v1_minus_v2)[i];
  }

  MixedState m{GridField(grid, std::move(sigma)), GridField(grid, std::move(ratio)),
               GridField(grid, std::move(f)),     GridField(grid, std::move(u)),
               std::move(clamped),                clamp_count};
  return m;
}

}  // namespace

MixedState to_mixed(const SpeciesState& state) { return build_mixed(state, nullptr); }

MixedState to_mixed(const SpeciesState& state, const PotentialPair& pair) {
  if (!(pair.grid() == state.grid())) throw DimensionError("potentials and state grids differ");
  const GridField diff = pair.v1 - pair.v2;
  return build_mixed(state, &diff);
}

SpeciesState from_mixed(const MixedState& mixed, double time) {
  const std::size_t n = mixed.sigma.size();
  std::vector<double> rho1(n), rho2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = mixed.sigma[i];
    const double r = mixed.ratio[i];
    rho1[i] = r * s;
    rho2[i] = (1.0 - r) * s;
  }
  return {GridField(mixed.grid(), std::move(rho1)), GridField(mixed.grid(), std::move(rho2)), time};
}

namespace {

void require_amplitude(double a, const char* name) {
  if (!(a > -1.0 && a < 1.0)) {
    throw DomainError(std::string("modulation amplitude ") + name + " = " + std::to_string(a) +
                      " must lie in (-1, 1) so the density stays nonnegative");
  }
}

GridField normalized(std::vector<double> values, const Grid& grid, const char* name) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0.0) {
      throw DomainError(std::string(name) + " is negative at cell " + std::to_string(i));
    }
  }
  GridField f(grid, std::move(values));
  const double mass = quadrature(f);
  if (!(mass > 0.0)) throw DomainError(std::string(name) + " has zero mass");
  f *= 1.0 / mass;
  return f;
}

}  // namespace

SpeciesState make_initial(const InitialSpec& spec, const Grid& grid) {
  const std::size_t n = grid.size();
  std::vector<double> rho1(n), rho2(n);
  constexpr double pi = std::numbers::pi;

  switch (spec.family) {
    case InitialFamily::uniform:
      std::fill(rho1.begin(), rho1.end(), 1.0);
      std::fill(rho2.begin(), rho2.end(), 1.0);
      break;
    case InitialFamily::figure1: {
      require_amplitude(spec.a1, "a1");
      require_amplitude(spec.a2, "a2");
      if (!(spec.vacuum_exponent >= 0.0 && spec.vacuum_exponent < 1.0)) {
        throw DomainError("vacuum_exponent must lie in [0, 1) for an integrable profile");
      }
      for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.center(i);
        // The singular point x = 1/2 is never sampled; on odd grids its cell uses dx/2.
        const double dist = std::max(std::abs(x - 0.5), 0.5 * grid.dx());
        const double g = x * (1.0 - x) / std::pow(dist, spec.vacuum_exponent);
        rho1[i] = g * (1.0 - spec.a1 * std::sin(spec.k1 * pi * x));
        rho2[i] = g * (1.0 - spec.a2 * std::sin(spec.k2 * pi * x));
      }
      break;
    }
    case InitialFamily::cosine_mix:
      require_amplitude(spec.a1, "a1");
      require_amplitude(spec.a2, "a2");
      for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.center(i);
        rho1[i] = 1.0 + spec.a1 * std::cos(2.0 * pi * spec.k1 * x + spec.phase);
        rho2[i] = 1.0 + spec.a2 * std::cos(2.0 * pi * spec.k2 * x);
      }
      break;
    case InitialFamily::tabulated:
      if (!spec.rho1_samples || !spec.rho2_samples) {
        throw DomainError("tabulated initial data needs samples for both species");
      }
      if (spec.rho1_samples->size() != n || spec.rho2_samples->size() != n) {
        throw DimensionError("tabulated initial data does not match the grid");
      }
      std::copy(spec.rho1_samples->values().begin(), spec.rho1_samples->values().end(),
                rho1.begin());
      std::copy(spec.rho2_samples->values().begin(), spec.rho2_samples->values().end(),
                rho2.begin());
      break;
  }

  if (spec.noise != 0.0) {
    if (!(spec.noise > 0.0 && spec.noise < 1.0)) {
      throw DomainError("noise amplitude must lie in [0, 1)");
    }
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      rho1[i] *= 1.0 + spec.noise * unit(rng);
      rho2[i] *= 1.0 + spec.noise * unit(rng);
    }
  }

  return {normalized(std::move(rho1), grid, "rho1"), normalized(std::move(rho2), grid, "rho2"), 0.0};
}

MixingHypothesisReport check_h1_h2(const SpeciesState& state, MixingCeilings ceilings) {
  const MixedState m = to_mixed(state);
  MixingHypothesisReport r;
  r.llogl = quadrature(m.sigma.map(xlogx));
  r.clamp_count = m.clamp_count;

  // TV of f(r) along the cyclic sequence of non-clamped cells.
  const std::size_t n = m.f_ratio.size();
  std::vector<double> kept;
  kept.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!m.clamped[i]) kept.push_back(m.f_ratio[i]);
  }
  double tv = 0.0;
  for (std::size_t i = 0; i + 1 < kept.size(); ++i) tv += std::abs(kept[i + 1] - kept[i]);
  if (kept.size() > 1) tv += std::abs(kept.front() - kept.back());
  r.tv_logratio = tv;
  r.mixing_bound = lp_norm(m.f_ratio, kInfExponent);

  r.h1_pass = std::isfinite(r.llogl) && std::abs(r.llogl) <= ceilings.llogl_ceiling;
  r.h2_pass = !m.segregation_warning() && std::isfinite(r.tv_logratio) &&
              r.tv_logratio <= ceilings.tv_ceiling && r.mixing_bound <= ceilings.mixing_ceiling;
  r.pass = r.h1_pass && r.h2_pass;
  return r;
}

}  // namespace cdlab
