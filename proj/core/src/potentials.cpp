#include "cdlab/potentials.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cdlab/errors.hpp"

namespace cdlab {

PotentialSpec PotentialSpec::cosine(std::vector<CosineTerm> terms) {
  for (const auto& t : terms) {
    if (t.wavenumber <= 0) throw DomainError("cosine wavenumbers must be positive integers");
    if (!std::isfinite(t.amplitude) || !std::isfinite(t.phase)) {
      throw DomainError("cosine term parameters must be finite");
    }
  }
  PotentialSpec s;
  s.kind = PotentialKind::cosine_sum;
  s.terms = std::move(terms);
  return s;
}

PotentialSpec PotentialSpec::tabulated(GridField samples) {
  PotentialSpec s;
  s.kind = PotentialKind::tabulated;
  s.samples = std::move(samples);
  return s;
}

double PotentialSpec::analytic(double x, int derivative) const {
  if (kind == PotentialKind::zero) return 0.0;
  if (kind == PotentialKind::tabulated) {
    throw DomainError("tabulated potentials have no analytic derivatives");
  }
  double sum = 0.0;
  for (const auto& t : terms) {
    const double w = 2.0 * std::numbers::pi * t.wavenumber;
    const double arg = w * x + t.phase;
    const double scale = t.amplitude * std::pow(w, derivative);
    // d^j/dx^j cos cycles through cos, -sin, -cos, sin
    switch (derivative % 4) {
      case 0: sum += scale * std::cos(arg); break;
      case 1: sum -= scale * std::sin(arg); break;
      case 2: sum -= scale * std::cos(arg); break;
      default: sum += scale * std::sin(arg); break;
    }
  }
  return sum;
}

namespace {

GridField sample_values(const PotentialSpec& spec, const Grid& grid) {
  if (spec.kind == PotentialKind::tabulated) {
    if (!spec.samples || spec.samples->size() != grid.size()) {
      throw DimensionError("tabulated potential has " +
                           std::to_string(spec.samples ? spec.samples->size() : 0) +
                           " samples, grid has " + std::to_string(grid.size()) + " cells");
    }
    return GridField(grid, std::vector<double>(spec.samples->values().begin(),
                                               spec.samples->values().end()));
  }
  return GridField::sample(grid, [&](double x) { return spec.analytic(x, 0); });
}

GridField center_derivative(const PotentialSpec& spec, const GridField& samples, int order) {
  const Grid& grid = samples.grid();
  if (spec.has_analytic_derivatives()) {
    return GridField::sample(grid, [&](double x) { return spec.analytic(x, order); });
  }
  GridField d = samples;
  for (int j = 0; j < order; ++j) d = periodic_diff(d);
  return d;
}

// Derivative at the right face of each cell: analytic where possible, else the
// two-point difference (V[i+1] - V[i]) / dx.
GridField face_derivative(const PotentialSpec& spec, const GridField& samples) {
  const Grid& grid = samples.grid();
  const std::size_t n = grid.size();
  std::vector<double> d(n);
  if (spec.has_analytic_derivatives()) {
    for (std::size_t i = 0; i < n; ++i) d[i] = spec.analytic(grid.face(i), 1);
  } else {
    const double inv_dx = 1.0 / grid.dx();
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = (samples[(i + 1) % n] - samples[i]) * inv_dx;
    }
  }
  return GridField(grid, std::move(d));
}

}  // namespace

PotentialPair build_pair(const PotentialSpec& spec1, const PotentialSpec& spec2, const Grid& grid) {
  GridField v1 = sample_values(spec1, grid);
  GridField v2 = sample_values(spec2, grid);
  GridField v1_x = center_derivative(spec1, v1, 1);
  GridField v2_x = center_derivative(spec2, v2, 1);
  GridField v1_x_face = face_derivative(spec1, v1);
  GridField v2_x_face = face_derivative(spec2, v2);
  GridField V = v1_x - v2_x;
  GridField W = v2_x;
  GridField V_x = (spec1.has_analytic_derivatives() && spec2.has_analytic_derivatives())
                      ? center_derivative(spec1, v1, 2) - center_derivative(spec2, v2, 2)
                      : periodic_diff(V);
  return PotentialPair{spec1,  spec2,  std::move(v1),        std::move(v2),
                       std::move(v1_x), std::move(v2_x), std::move(v1_x_face),
                       std::move(v2_x_face), std::move(V), std::move(W), std::move(V_x)};
}

PotentialPair PotentialPair::on_grid(const Grid& grid) const {
  return build_pair(spec1, spec2, grid);
}

PotentialPair PotentialPair::swapped() const {
  return build_pair(spec2, spec1, grid());
}

PotentialHypothesisReport check_h3_h4(const PotentialPair& pair, HypothesisCeilings ceilings) {
  PotentialHypothesisReport r;
  r.h3_v1 = sobolev_norm(pair.v1, 2, 1.0);
  r.h3_v2 = sobolev_norm(pair.v2, 2, 1.0);
  r.h4 = sobolev_norm(pair.v1 - pair.v2, 3, 1.0);
  const double c = ceilings.sobolev_ceiling;
  r.pass = std::isfinite(r.h3_v1) && std::isfinite(r.h3_v2) && std::isfinite(r.h4) &&
           r.h3_v1 <= c && r.h3_v2 <= c && r.h4 <= c;
  return r;
}

GronwallConstants gronwall_constants(const PotentialPair& pair) {
  const GridField& V = pair.V;
  const GridField VW = V * pair.W;
  const GridField V2 = V * V;
  const double sup_v2 = lp_norm(V2, kInfExponent);
  GronwallConstants g;
  g.alpha = sobolev_norm(V, 2, 1.0) + sobolev_norm(VW, 1, 1.0) + sobolev_norm(V2, 1, 1.0) +
            sup_v2 * lp_norm(V, 1.0);
  g.beta = sup_v2;
  return g;
}

}  // namespace cdlab
