#include "cdlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "cdlab/errors.hpp"

namespace cdlab {

FirstOrderEnergy first_order_energy(const MixedState& mixed, const PotentialPair& pair) {
  if (!(pair.grid() == mixed.grid())) throw DimensionError("potentials and state grids differ");
  const GridField fx = periodic_diff(mixed.f_ratio);
  const std::size_t n = fx.size();
  FirstOrderEnergy e;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ip = (i + 1) % n;
    const std::size_t im = (i + n - 1) % n;
    if (mixed.clamped[i] || mixed.clamped[ip] || mixed.clamped[im]) {
      ++e.excluded_cells;
      continue;
    }
    sum += std::abs(fx[i] + pair.V[i]);
  }
  e.value = sum * mixed.grid().dx();
  e.reliable = static_cast<double>(e.excluded_cells) <= kSegregationFraction * static_cast<double>(n);
  return e;
}

double gronwall_envelope(double e0, const GronwallConstants& constants, double s) {
  if (!(s >= 0.0)) throw DomainError("envelope time must be >= 0");
  return (e0 + constants.alpha * s) * std::exp(s * constants.beta);
}

double entropy_eta(const SpeciesState& state, const PotentialPair& pair, double eta) {
  const auto r1 = state.rho1.values();
  const auto r2 = state.rho2.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < r1.size(); ++i) {
    sum += (1.0 - 2.0 * eta) * xlogx(r1[i] + r2[i]) + eta * xlogx(r1[i]) + eta * xlogx(r2[i]) +
           pair.v1[i] * r1[i] + pair.v2[i] * r2[i];
  }
  return sum * state.grid().dx();
}

std::pair<double, double> species_bv(const SpeciesState& state) {
  return {lp_norm(state.rho1, 1.0) + total_variation(state.rho1),
          lp_norm(state.rho2, 1.0) + total_variation(state.rho2)};
}

double sqrt_sigma_h1_squared(const SpeciesState& state) {
  const GridField root = state.sigma().map([](double s) { return std::sqrt(std::max(s, 0.0)); });
  const GridField grad = periodic_diff(root);
  return quadrature(root * root) + quadrature(grad * grad);
}

double sqrt_sigma_dissipation(const Trajectory& trajectory) {
  const auto& snaps = trajectory.snapshots;
  if (snaps.size() < 2) return 0.0;
  double total = 0.0;
  double prev = sqrt_sigma_h1_squared(snaps.front());
  for (std::size_t k = 1; k < snaps.size(); ++k) {
    const double cur = sqrt_sigma_h1_squared(snaps[k]);
    total += 0.5 * (prev + cur) * (snaps[k].time - snaps[k - 1].time);
    prev = cur;
  }
  return total;
}

namespace {

double profile_value(TimeProfile profile, double t, double horizon) {
  switch (profile) {
    case TimeProfile::hermite_bump: {
      const double s = t / horizon;
      return (1.0 - s) * (1.0 - s) * (1.0 + 2.0 * s);
    }
  }
  return 0.0;
}

}  // namespace

std::vector<WeakResidual> weak_residual(const Trajectory& trajectory, const PotentialPair& pair,
                                        double eta, const std::vector<WeakTestFunction>& tests) {
  const auto& snaps = trajectory.snapshots;
  if (snaps.size() < 17) {
    throw DomainError("weak residual needs at least 16 snapshot intervals, got " +
                      std::to_string(snaps.empty() ? 0 : snaps.size() - 1));
  }
  const double horizon = snaps.back().time - snaps.front().time;
  if (!(horizon > 0.0)) throw DomainError("weak residual needs a positive time horizon");
  const std::size_t intervals = snaps.size() - 1;
  const double dt = horizon / static_cast<double>(intervals);
  for (std::size_t k = 1; k < snaps.size(); ++k) {
    if (std::abs(snaps[k].time - snaps[k - 1].time - dt) > 1e-9 * horizon) {
      throw DomainError("weak residual needs a uniform snapshot cadence");
    }
  }
  const Grid& grid = snaps.front().grid();
  if (!(pair.grid() == grid)) throw DimensionError("potentials and trajectory grids differ");

  // Per-snapshot flux fields F_i = rho_i d/dx((1-2eta) log sigma + V_i) + eta d/dx rho_i.
  std::vector<GridField> flux1, flux2;
  flux1.reserve(snaps.size());
  flux2.reserve(snaps.size());
  for (const auto& s : snaps) {
    const GridField log_sigma_x = periodic_diff(
        s.sigma().map([](double v) { return std::log(std::max(v, kDensityFloor)); }));
    GridField drift1 = (1.0 - 2.0 * eta) * log_sigma_x + pair.v1_x;
    GridField drift2 = (1.0 - 2.0 * eta) * log_sigma_x + pair.v2_x;
    flux1.push_back(s.rho1 * drift1 + eta * periodic_diff(s.rho1));
    flux2.push_back(s.rho2 * drift2 + eta * periodic_diff(s.rho2));
  }

  std::vector<WeakResidual> out;
  for (const auto& test : tests) {
    const double w = 2.0 * std::numbers::pi * test.wavenumber;
    GridField phi = GridField::sample(grid, [&](double x) {
      if (test.wavenumber == 0) return 1.0;
      return test.mode == SpatialMode::cosine ? std::cos(w * x) : std::sin(w * x);
    });
    GridField phi_x = GridField::sample(grid, [&](double x) {
      if (test.wavenumber == 0) return 0.0;
      return test.mode == SpatialMode::cosine ? -w * std::sin(w * x) : w * std::cos(w * x);
    });

    const auto defect = [&](auto density, const std::vector<GridField>& flux) {
      std::vector<double> psi(snaps.size()), a(snaps.size()), b(snaps.size());
      for (std::size_t k = 0; k < snaps.size(); ++k) {
        psi[k] = profile_value(test.profile, snaps[k].time - snaps.front().time, horizon);
        a[k] = quadrature(density(snaps[k]) * phi);
        b[k] = quadrature(flux[k] * phi_x);
      }
      double lhs = a[0] * psi[0];
      double rhs = 0.0;
      for (std::size_t k = 0; k < intervals; ++k) {
        // psi increments are exact, so constant-in-time densities telescope exactly
        lhs += 0.5 * (a[k] + a[k + 1]) * (psi[k + 1] - psi[k]);
        rhs += 0.5 * (b[k] * psi[k] + b[k + 1] * psi[k + 1]) * dt;
      }
      return std::abs(lhs - rhs);
    };

    WeakResidual res;
    res.test = test;
    res.species1 = defect([](const SpeciesState& s) -> const GridField& { return s.rho1; }, flux1);
    res.species2 = defect([](const SpeciesState& s) -> const GridField& { return s.rho2; }, flux2);
    out.push_back(res);
  }
  return out;
}

DiagnosticsRecord record(const SpeciesState& state, const MixedState& mixed,
                         const PotentialPair& pair, const SchemeConfig& cfg, RecorderState& running) {
  DiagnosticsRecord rec;
  rec.time = state.time;
  rec.mass1 = quadrature(state.rho1);
  rec.mass2 = quadrature(state.rho2);
  const FirstOrderEnergy energy = first_order_energy(mixed, pair);
  rec.first_order_energy = energy.value;
  rec.energy_reliable = energy.reliable;
  rec.clamp_count = mixed.clamp_count;

  const double h1sq = sqrt_sigma_h1_squared(state);
  if (!running.started) {
    running.started = true;
    running.e0 = energy.value;
    running.constants = gronwall_constants(pair);
    running.cumulative_h1sq = 0.0;
  } else {
    running.cumulative_h1sq += 0.5 * (running.prev_h1sq + h1sq) * (state.time - running.prev_time);
  }
  running.prev_time = state.time;
  running.prev_h1sq = h1sq;

  rec.gronwall_envelope = gronwall_envelope(running.e0, running.constants, state.time);
  rec.entropy_eta = entropy_eta(state, pair, cfg.eta);
  rec.llogl = quadrature(mixed.sigma.map(xlogx));
  rec.tv_r = total_variation(mixed.ratio);
  rec.tv_f = total_variation(mixed.f_ratio);
  const auto [bv1, bv2] = species_bv(state);
  rec.bv_rho1 = bv1;
  rec.bv_rho2 = bv2;
  rec.sqrt_sigma_h1_cum = running.cumulative_h1sq;
  const auto r1 = state.rho1.values();
  const auto r2 = state.rho2.values();
  rec.min_density = std::min(*std::min_element(r1.begin(), r1.end()),
                             *std::min_element(r2.begin(), r2.end()));
  return rec;
}

Observer make_recorder(const PotentialPair& pair, const SchemeConfig& cfg) {
  auto running = std::make_shared<RecorderState>();
  running->constants = gronwall_constants(pair);
  return [pair, cfg, running](const SpeciesState& state, Trajectory& traj) {
    const MixedState mixed = to_mixed(state, pair);
    traj.records.push_back(record(state, mixed, pair, cfg, *running));
  };
}

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

CheckResult check_mass(const std::vector<DiagnosticsRecord>& records, const CheckOptions& opt) {
  CheckResult c{"mass_conservation", true, 0.0, ""};
  if (records.empty()) return c;
  for (const auto& r : records) {
    c.worst = std::max({c.worst, std::abs(r.mass1 - records.front().mass1),
                        std::abs(r.mass2 - records.front().mass2)});
  }
  c.pass = c.worst <= opt.mass_tolerance;
  c.detail = "max |mass(t) - mass(0)| = " + fmt_double(c.worst);
  return c;
}

CheckResult check_positivity(const std::vector<DiagnosticsRecord>& records) {
  CheckResult c{"positivity", true, std::numeric_limits<double>::infinity(), ""};
  for (const auto& r : records) c.worst = std::min(c.worst, r.min_density);
  if (records.empty()) c.worst = 0.0;
  c.pass = c.worst >= 0.0;
  c.detail = "min density = " + fmt_double(c.worst);
  return c;
}

CheckResult check_gronwall(const std::vector<DiagnosticsRecord>& records, const CheckOptions& opt) {
  // Absolute allowance for round-off when the envelope itself is zero.
  constexpr double kAbsFloor = 1e-10;
  CheckResult c{"gronwall_certificate", true, 0.0, ""};
  std::size_t unreliable = 0;
  for (const auto& r : records) {
    if (!r.energy_reliable) {
      ++unreliable;
      continue;
    }
    if (r.gronwall_envelope > 0.0) {
      c.worst = std::max(c.worst, r.first_order_energy / r.gronwall_envelope);
    }
    if (r.first_order_energy > opt.gronwall_slack * r.gronwall_envelope + kAbsFloor) c.pass = false;
  }
  if (unreliable > 0) c.pass = false;
  c.detail = "max energy/envelope = " + fmt_double(c.worst) + " (slack " +
             fmt_double(opt.gronwall_slack) + ")" +
             (unreliable > 0 ? ", " + std::to_string(unreliable) + " unreliable snapshots" : "");
  return c;
}

CheckResult check_tv_ordering(const std::vector<DiagnosticsRecord>& records) {
  CheckResult c{"tv_ordering", true, 0.0, ""};
  for (const auto& r : records) {
    c.worst = std::max(c.worst, r.tv_r - 0.25 * r.tv_f);
    if (!(r.tv_r <= 0.25 * r.tv_f)) c.pass = false;
  }
  c.detail = "max (TV(r) - TV(f)/4) = " + fmt_double(c.worst);
  return c;
}

CheckResult check_entropy_decay(const std::vector<DiagnosticsRecord>& records, double dx,
                                const CheckOptions& opt) {
  CheckResult c{"entropy_decay", true, -std::numeric_limits<double>::infinity(), ""};
  for (std::size_t k = 1; k < records.size(); ++k) {
    const double rise = records[k].entropy_eta - records[k - 1].entropy_eta;
    const double tol = opt.entropy_tolerance_factor * dx * (records[k].time - records[k - 1].time);
    c.worst = std::max(c.worst, rise - tol);
    if (rise > tol) c.pass = false;
  }
  if (records.size() < 2) c.worst = 0.0;
  c.detail = "max (rise - tolerance) = " + fmt_double(c.worst);
  return c;
}

CheckResult check_envelope_monotone(const std::vector<DiagnosticsRecord>& records) {
  CheckResult c{"envelope_monotone", true, 0.0, ""};
  for (std::size_t k = 1; k < records.size(); ++k) {
    const double drop = records[k - 1].gronwall_envelope - records[k].gronwall_envelope;
    c.worst = std::max(c.worst, drop);
    if (drop > 0.0) c.pass = false;
  }
  c.detail = "max envelope decrease = " + fmt_double(c.worst);
  return c;
}

CheckResult check_species_bv_bound(const Trajectory& trajectory) {
  CheckResult c{"species_bv_bound", true, -std::numeric_limits<double>::infinity(), ""};
  for (const auto& s : trajectory.snapshots) {
    const MixedState m = to_mixed(s);
    const double sup = lp_norm(m.sigma, kInfExponent);
    const double tv_sigma = total_variation(m.sigma);
    // Unclamped ratio where defined, so rho_1 = r sigma holds to rounding.
    std::vector<double> r(m.ratio.values().begin(), m.ratio.values().end());
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (m.sigma[i] >= kDensityFloor) r[i] = s.rho1[i] / m.sigma[i];
    }
    const double tv_r = total_variation(GridField(s.grid(), std::move(r)));
    const auto [bv1, bv2] = species_bv(s);
    // r and 1 - r have the same variation.
    const double slack = 1e-12 * (1.0 + sup * tv_r + tv_sigma);
    const double m1 = bv1 - (sup * tv_r + tv_sigma + quadrature(s.rho1));
    const double m2 = bv2 - (sup * tv_r + tv_sigma + quadrature(s.rho2));
    c.worst = std::max({c.worst, m1, m2});
    if (m1 > slack || m2 > slack) c.pass = false;
  }
  if (trajectory.snapshots.empty()) c.worst = 0.0;
  c.detail = "max BV excess over bound = " + fmt_double(c.worst);
  return c;
}

std::vector<CheckResult> check_invariants(const Trajectory& trajectory, double dx,
                                          const CheckOptions& opt) {
  const auto& recs = trajectory.records;
  std::vector<CheckResult> out;
  out.push_back(check_positivity(recs));
  out.push_back(check_tv_ordering(recs));
  out.push_back(check_envelope_monotone(recs));
  out.push_back(check_species_bv_bound(trajectory));
  if (!opt.reactions) {
    out.push_back(check_mass(recs, opt));
    out.push_back(check_entropy_decay(recs, dx, opt));
    out.push_back(check_gronwall(recs, opt));
  } else {
    CheckResult c{"reaction_mass_law", true, trajectory.max_mass_drift, ""};
    c.pass = trajectory.max_mass_drift <= 1e-12;
    c.detail = "max per-step |increment - dt*int(rho F)| = " + fmt_double(c.worst);
    out.push_back(c);
  }
  return out;
}

}  // namespace cdlab
