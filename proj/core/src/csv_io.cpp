#include "cdlab/csv_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cdlab/errors.hpp"
#include "cdlab/mixing.hpp"

namespace cdlab::csv {

namespace {

bool parse_pair(const std::string& line, std::pair<double, double>& out) {
  std::string l = line;
  std::replace(l.begin(), l.end(), ',', ' ');
  std::istringstream is(l);
  double x = 0.0, v = 0.0;
  if (!(is >> x >> v)) return false;
  std::string rest;
  if (is >> rest) return false;
  out = {x, v};
  return true;
}

// Round-trip precision for doubles.
void put(std::ostream& os, double v) {
  if (std::isnan(v)) {
    os << "nan";
    return;
  }
  os << v;
}

}  // namespace

std::vector<std::pair<double, double>> read_xy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open CSV file '" + path + "'");
  std::vector<std::pair<double, double>> rows;
  std::string line;
  int lineno = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::pair<double, double> p;
    if (!parse_pair(line, p)) {
      if (!seen_data) {
        seen_data = true;  // header row
        continue;
      }
      throw Error(path + ":" + std::to_string(lineno) + ": expected two numeric columns");
    }
    seen_data = true;
    rows.push_back(p);
  }
  if (rows.size() < 2) throw Error(path + ": need at least two data rows");
  return rows;
}

GridField resample_periodic(std::vector<std::pair<double, double>> samples, const Grid& grid) {
  if (samples.size() < 2) throw DimensionError("periodic resampling needs at least two samples");
  for (auto& [x, v] : samples) {
    if (!std::isfinite(x) || !std::isfinite(v)) throw DomainError("non-finite CSV sample");
    x -= std::floor(x);
  }
  std::sort(samples.begin(), samples.end());
  const std::size_t m = samples.size();
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.center(i);
    auto it = std::upper_bound(samples.begin(), samples.end(), x,
                               [](double a, const std::pair<double, double>& p) { return a < p.first; });
    // Bracketing samples with periodic wrap.
    const std::size_t hi = (it == samples.end()) ? 0 : static_cast<std::size_t>(it - samples.begin());
    const std::size_t lo = (hi == 0) ? m - 1 : hi - 1;
    double xl = samples[lo].first;
    double xh = samples[hi].first;
    if (xh <= xl) xh += 1.0;
    double xq = x;
    if (xq < xl) xq += 1.0;
    const double w = (xh - xl) > 0.0 ? (xq - xl) / (xh - xl) : 0.0;
    out[i] = (1.0 - w) * samples[lo].second + w * samples[hi].second;
  }
  return GridField(grid, std::move(out));
}

void write_snapshots(std::ostream& os, const Trajectory& traj) {
  os.precision(17);
  os << kSnapshotsHeader << '\n' << "t,x,rho1,rho2,sigma,r,f_r\n";
  for (const auto& s : traj.snapshots) {
    const MixedState m = to_mixed(s);
    const Grid& g = s.grid();
    for (std::size_t i = 0; i < g.size(); ++i) {
      put(os, s.time); os << ',';
      put(os, g.center(i)); os << ',';
      put(os, s.rho1[i]); os << ',';
      put(os, s.rho2[i]); os << ',';
      put(os, m.sigma[i]); os << ',';
      put(os, m.ratio[i]); os << ',';
      put(os, m.f_ratio[i]); os << '\n';
    }
  }
}

void write_diagnostics(std::ostream& os, const std::vector<DiagnosticsRecord>& records) {
  os.precision(17);
  os << kDiagnosticsHeader << '\n'
     << "time,mass1,mass2,first_order_energy,gronwall_envelope,entropy_eta,llogl,tv_r,tv_f,"
        "bv_rho1,bv_rho2,sqrt_sigma_h1_cum,min_density,clamp_count\n";
  for (const auto& r : records) {
    for (double v : {r.time, r.mass1, r.mass2, r.first_order_energy, r.gronwall_envelope,
                     r.entropy_eta, r.llogl, r.tv_r, r.tv_f, r.bv_rho1, r.bv_rho2,
                     r.sqrt_sigma_h1_cum, r.min_density}) {
      put(os, v);
      os << ',';
    }
    os << r.clamp_count << '\n';
  }
}

void write_sweep(std::ostream& os, const std::vector<SweepRow>& rows) {
  os.precision(17);
  os << kSweepHeader << '\n' << "eta_j,d_j,ratio\n";
  for (const auto& r : rows) {
    put(os, r.eta); os << ',';
    put(os, r.distance); os << ',';
    put(os, r.ratio); os << '\n';
  }
}

}  // namespace cdlab::csv
