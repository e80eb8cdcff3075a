#include "cdlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cdlab/errors.hpp"

namespace cdlab {

void SchemeConfig::validate() const {
  if (!(eta > 0.0 && eta <= 0.5)) throw DomainError("eta must lie in (0, 1/2]");
  if (!(cfl_safety > 0.0 && cfl_safety < 1.0)) throw DomainError("cfl_safety must lie in (0, 1)");
  if (!(dt_max > 0.0)) throw DomainError("dt_max must be positive");
  if (positivity_retry_limit < 0) throw DomainError("positivity_retry_limit must be >= 0");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw DomainError("t_end must be finite and >= 0");
}

namespace {

struct FluxWork {
  std::vector<double> flux1;
  std::vector<double> flux2;
  double theta_max = 0.0;
};

// Face value of rho_s / sigma. Vacuum cells (sigma below the floor) never contribute.
double face_ratio(double rl, double rr, bool vl, bool vr, double g, FluxRatioRule rule,
                  std::size_t face) {
  if (!vl && !vr) {
    throw VacuumFluxError(face, "vacuum on both sides of face " + std::to_string(face));
  }
  if (!vl) return rr;
  if (!vr) return rl;
  if (rule == FluxRatioRule::arithmetic) return 0.5 * (rl + rr);
  // d/dt rho = d/dx (theta G) transports mass with velocity -G / sigma: for G > 0 the
  // upwind cell is on the right.
  return g > 0.0 ? rr : rl;
}

FluxWork compute_fluxes(std::span<const double> rho1, std::span<const double> rho2,
                        const PotentialPair& pair, const SchemeConfig& cfg) {
  const std::size_t n = rho1.size();
  const double dx = pair.grid().dx();
  const double inv_dx = 1.0 / dx;
  const double eta = cfg.eta;
  const double cross = 1.0 - 2.0 * eta;
  const auto dv1 = pair.v1_x_face.values();
  const auto dv2 = pair.v2_x_face.values();

  FluxWork w;
  w.flux1.resize(n);
  w.flux2.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t l = j;
    const std::size_t r = (j + 1 == n) ? 0 : j + 1;
    const double sl = rho1[l] + rho2[l];
    const double sr = rho1[r] + rho2[r];
    const bool vl = sl >= kDensityFloor;
    const bool vr = sr >= kDensityFloor;
    const double dsigma = (sr - sl) * inv_dx;
    const double sigma_face = 0.5 * (sl + sr);

    const double g1 = cross * dsigma + sigma_face * dv1[j];
    const double g2 = cross * dsigma + sigma_face * dv2[j];
    const double t1 = face_ratio(vl ? rho1[l] / sl : 0.0, vr ? rho1[r] / sr : 0.0, vl, vr, g1,
                                 cfg.flux_ratio_rule, j);
    const double t2 = face_ratio(vl ? rho2[l] / sl : 0.0, vr ? rho2[r] / sr : 0.0, vl, vr, g2,
                                 cfg.flux_ratio_rule, j);
    w.theta_max = std::max({w.theta_max, t1, t2});
    w.flux1[j] = eta * (rho1[r] - rho1[l]) * inv_dx + t1 * g1;
    w.flux2[j] = eta * (rho2[r] - rho2[l]) * inv_dx + t2 * g2;
    if (!std::isfinite(w.flux1[j]) || !std::isfinite(w.flux2[j])) {
      throw VacuumFluxError(j, "non-finite flux at face " + std::to_string(j));
    }
  }
  return w;
}

double drift_bound(const PotentialPair& pair) {
  return std::max(lp_norm(pair.v1_x_face, kInfExponent), lp_norm(pair.v2_x_face, kInfExponent));
}

double dt_from_theta(double theta_max, const PotentialPair& pair, const SchemeConfig& cfg) {
  const double dx = pair.grid().dx();
  const double d_max = cfg.eta + (1.0 - 2.0 * cfg.eta) * theta_max + dx * drift_bound(pair);
  return cfg.cfl_safety * dx * dx / (2.0 * d_max);
}

double sum_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

FaceFluxes species_flux(const SpeciesState& state, const PotentialPair& pair,
                        const SchemeConfig& cfg) {
  if (!(pair.grid() == state.grid())) throw DimensionError("potentials and state grids differ");
  FluxWork w = compute_fluxes(state.rho1.values(), state.rho2.values(), pair, cfg);
  return {GridField(state.grid(), std::move(w.flux1)), GridField(state.grid(), std::move(w.flux2))};
}

double cfl_dt(const SpeciesState& state, const PotentialPair& pair, const SchemeConfig& cfg) {
  const FluxWork w = compute_fluxes(state.rho1.values(), state.rho2.values(), pair, cfg);
  return dt_from_theta(w.theta_max, pair, cfg);
}

StepResult step(const SpeciesState& state, const PotentialPair& pair, const SchemeConfig& cfg,
                const ReactionSpec* reactions, double dt_cap) {
  if (!(pair.grid() == state.grid())) throw DimensionError("potentials and state grids differ");
  const std::size_t n = state.grid().size();
  const double dx = state.grid().dx();
  const double inv_dx = 1.0 / dx;
  const auto rho1 = state.rho1.values();
  const auto rho2 = state.rho2.values();

  const FluxWork w = compute_fluxes(rho1, rho2, pair, cfg);
  std::vector<double> div1(n), div2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t im = (i == 0) ? n - 1 : i - 1;
    div1[i] = (w.flux1[i] - w.flux1[im]) * inv_dx;
    div2[i] = (w.flux2[i] - w.flux2[im]) * inv_dx;
  }

  std::vector<double> src1(n, 0.0), src2(n, 0.0);
  if (reactions != nullptr) {
    for (std::size_t i = 0; i < n; ++i) {
      src1[i] = rho1[i] * reactions->f1(rho1[i], rho2[i]);
      src2[i] = rho2[i] * reactions->f2(rho1[i], rho2[i]);
    }
  }

  double dt = std::min({cfg.dt_max, dt_cap, dt_from_theta(w.theta_max, pair, cfg)});
  std::vector<double> next1(n), next2(n);
  int retries = 0;
  while (true) {
    double min_val = std::numeric_limits<double>::infinity();
    std::size_t min_cell = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (reactions != nullptr) {
        next1[i] = rho1[i] + dt * div1[i] + dt * src1[i];
        next2[i] = rho2[i] + dt * div2[i] + dt * src2[i];
      } else {
        next1[i] = rho1[i] + dt * div1[i];
        next2[i] = rho2[i] + dt * div2[i];
      }
      const double m = std::min(next1[i], next2[i]);
      if (m < min_val) {
        min_val = m;
        min_cell = i;
      }
    }
    if (min_val >= 0.0) break;
    if (retries >= cfg.positivity_retry_limit) {
      throw PositivityError(min_cell, "density stays negative at cell " + std::to_string(min_cell) +
                                          " after " + std::to_string(retries) + " dt halvings");
    }
    dt *= 0.5;
    ++retries;
  }

  StepReport report;
  report.dt_used = dt;
  report.retries = retries;
  report.mass_increment = {(sum_of(next1) - sum_of(rho1)) * dx, (sum_of(next2) - sum_of(rho2)) * dx};
  report.reaction_mass = {dt * sum_of(src1) * dx, dt * sum_of(src2) * dx};
  report.mass_drift = {report.mass_increment[0] - report.reaction_mass[0],
                       report.mass_increment[1] - report.reaction_mass[1]};
  report.min_density = std::min(*std::min_element(next1.begin(), next1.end()),
                                *std::min_element(next2.begin(), next2.end()));

  StepResult out{SpeciesState{GridField(state.grid(), std::move(next1)),
                              GridField(state.grid(), std::move(next2)), state.time + dt},
                 report};
  return out;
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t;
  t.reserve(snapshots.size());
  for (const auto& s : snapshots) t.push_back(s.time);
  return t;
}

Trajectory run(const SpeciesState& initial, const PotentialPair& pair, const SchemeConfig& cfg,
               const ReactionSpec* reactions, std::size_t snapshot_count,
               const std::vector<Observer>& observers) {
  cfg.validate();
  Trajectory traj;
  const auto snapshot = [&](const SpeciesState& s) {
    traj.snapshots.push_back(s);
    for (const auto& obs : observers) obs(traj.snapshots.back(), traj);
  };

  SpeciesState current = initial;
  current.time = 0.0;
  snapshot(current);
  if (cfg.t_end == 0.0 || snapshot_count == 0) return traj;

  try {
    for (std::size_t k = 1; k <= snapshot_count; ++k) {
      const double target = cfg.t_end * static_cast<double>(k) / static_cast<double>(snapshot_count);
      while (current.time < target) {
        const double remaining = target - current.time;
        StepResult res = step(current, pair, cfg, reactions, remaining);
        ++traj.steps;
        traj.total_retries += res.report.retries;
        traj.min_dt = std::min(traj.min_dt, res.report.dt_used);
        traj.max_dt = std::max(traj.max_dt, res.report.dt_used);
        traj.max_mass_drift = std::max({traj.max_mass_drift, std::abs(res.report.mass_drift[0]),
                                        std::abs(res.report.mass_drift[1])});
        const bool hit = res.report.dt_used >= remaining;
        current = std::move(res.state);
        if (hit || target - current.time <= 1e-14 * cfg.t_end) current.time = target;
      }
      snapshot(current);
    }
  } catch (const std::exception& e) {
    traj.error = std::current_exception();
    traj.error_message = e.what();
  }
  return traj;
}

TransformedRhs transformed_rhs(const MixedState& mixed, const PotentialPair& pair,
                               const SchemeConfig& cfg, const ReactionSpec* reactions) {
  if (mixed.clamp_count > 0) {
    throw TransformUnavailableError("transformed system needs an unclamped state (" +
                                    std::to_string(mixed.clamp_count) + " clamped cells)");
  }
  if (!(pair.grid() == mixed.grid())) throw DimensionError("potentials and state grids differ");
  const Grid& grid = mixed.grid();
  const std::size_t n = grid.size();
  const double dx = grid.dx();
  const double inv_dx = 1.0 / dx;
  const double eta = cfg.eta;
  const auto sigma = mixed.sigma.values();
  const auto r = mixed.ratio.values();

  // Summed species flux (1 - eta) sigma_x + sigma W + r sigma V on faces.
  std::vector<double> face_flux(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t jr = (j + 1 == n) ? 0 : j + 1;
    const double sigma_face = 0.5 * (sigma[j] + sigma[jr]);
    const double r_face = 0.5 * (r[j] + r[jr]);
    const double w_face = pair.v2_x_face[j];
    const double v_face = pair.v1_x_face[j] - pair.v2_x_face[j];
    face_flux[j] = (1.0 - eta) * (sigma[jr] - sigma[j]) * inv_dx + sigma_face * w_face +
                   r_face * sigma_face * v_face;
  }
  std::vector<double> sigma_rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t im = (i == 0) ? n - 1 : i - 1;
    sigma_rhs[i] = (face_flux[i] - face_flux[im]) * inv_dx;
  }

  const GridField& f = mixed.f_ratio;
  const GridField f_x = periodic_diff(f);
  const GridField log_sigma_x = periodic_diff(mixed.sigma.map([](double s) { return std::log(s); }));
  std::vector<double> f_rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f_xx = (f.wrap(static_cast<std::ptrdiff_t>(i) + 1) - 2.0 * f[i] +
                         f.wrap(static_cast<std::ptrdiff_t>(i) - 1)) * inv_dx * inv_dx;
    const double V = pair.V[i];
    const double W = pair.W[i];
    f_rhs[i] = eta * f_xx - V * W + pair.V_x[i] +
               (f_x[i] + V) * (log_sigma_x[i] + W - eta * (2.0 * r[i] - 1.0) * f_x[i]) +
               ((1.0 - eta) - (1.0 - 2.0 * eta) * r[i]) * f_x[i] * V;
  }

  if (reactions != nullptr) {
    for (std::size_t i = 0; i < n; ++i) {
      const double rho1 = r[i] * sigma[i];
      const double rho2 = (1.0 - r[i]) * sigma[i];
      const double F1 = reactions->f1(rho1, rho2);
      const double F2 = reactions->f2(rho1, rho2);
      sigma_rhs[i] += r[i] * sigma[i] * F1 + (1.0 - r[i]) * sigma[i] * F2;
      f_rhs[i] += F1 - F2;
    }
  }

  return {GridField(grid, std::move(sigma_rhs)), GridField(grid, std::move(f_rhs))};
}

}  // namespace cdlab
