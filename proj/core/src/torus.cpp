#include "cdlab/torus.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cdlab/errors.hpp"

namespace cdlab {

Grid::Grid(std::size_t n_cells) : n_(n_cells), dx_(0.0) {
  if (n_cells < kMinCells) {
    throw DomainError("grid needs at least " + std::to_string(kMinCells) + " cells, got " +
                      std::to_string(n_cells));
  }
  dx_ = 1.0 / static_cast<double>(n_cells);
}

std::vector<double> Grid::centers() const {
  std::vector<double> xs(n_);
  for (std::size_t i = 0; i < n_; ++i) xs[i] = center(i);
  return xs;
}

GridField::GridField(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw DimensionError("field has " + std::to_string(values_.size()) + " values on a grid of " +
                         std::to_string(grid_.size()) + " cells");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw DomainError("non-finite field value at cell " + std::to_string(i));
    }
  }
}

GridField GridField::constant(const Grid& grid, double value) {
  return GridField(grid, std::vector<double>(grid.size(), value));
}

GridField GridField::sample(const Grid& grid, const std::function<double(double)>& fn) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.center(i));
  return GridField(grid, std::move(v));
}

double GridField::wrap(std::ptrdiff_t i) const noexcept {
  const auto n = static_cast<std::ptrdiff_t>(values_.size());
  std::ptrdiff_t k = i % n;
  if (k < 0) k += n;
  return values_[static_cast<std::size_t>(k)];
}

GridField GridField::map(const std::function<double(double)>& fn) const {
  std::vector<double> v(values_.size());
  std::transform(values_.begin(), values_.end(), v.begin(), fn);
  return GridField(grid_, std::move(v));
}

namespace {

void require_same_grid(const GridField& a, const GridField& b) {
  if (!(a.grid() == b.grid())) {
    throw DimensionError("fields live on grids of " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()) + " cells");
  }
}

}  // namespace

GridField& GridField::operator+=(const GridField& rhs) {
  require_same_grid(*this, rhs);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += rhs.values_[i];
  return *this;
}

GridField& GridField::operator-=(const GridField& rhs) {
  require_same_grid(*this, rhs);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= rhs.values_[i];
  return *this;
}

GridField& GridField::operator*=(const GridField& rhs) {
  require_same_grid(*this, rhs);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= rhs.values_[i];
  return *this;
}

GridField& GridField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

GridField& GridField::operator+=(double c) {
  for (double& v : values_) v += c;
  return *this;
}

GridField operator+(GridField lhs, const GridField& rhs) { return lhs += rhs; }
GridField operator-(GridField lhs, const GridField& rhs) { return lhs -= rhs; }
GridField operator*(GridField lhs, const GridField& rhs) { return lhs *= rhs; }
GridField operator*(double s, GridField f) { return f *= s; }
GridField operator+(GridField f, double c) { return f += c; }

GridField periodic_diff(const GridField& field) {
  const std::size_t n = field.size();
  const double inv2dx = 0.5 / field.grid().dx();
  const auto u = field.values();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ip = (i + 1 == n) ? 0 : i + 1;
    const std::size_t im = (i == 0) ? n - 1 : i - 1;
    d[i] = (u[ip] - u[im]) * inv2dx;
  }
  return GridField(field.grid(), std::move(d));
}

double quadrature(const GridField& field) {
  double sum = 0.0;
  for (double v : field.values()) sum += v;
  return sum * field.grid().dx();
}

double total_variation(const GridField& field) {
  const auto u = field.values();
  const std::size_t n = u.size();
  double tv = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) tv += std::abs(u[i + 1] - u[i]);
  tv += std::abs(u[0] - u[n - 1]);
  return tv;
}

double lp_norm(const GridField& field, double p) {
  if (!(p >= 1.0)) throw DomainError("L^p exponent must be >= 1");
  const auto u = field.values();
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : u) m = std::max(m, std::abs(v));
    return m;
  }
  double sum = 0.0;
  if (p == 1.0) {
    for (double v : u) sum += std::abs(v);
    return sum * field.grid().dx();
  }
  for (double v : u) sum += std::pow(std::abs(v), p);
  return std::pow(sum * field.grid().dx(), 1.0 / p);
}

double sobolev_norm(const GridField& field, int order, double p) {
  if (order < 0 || order > 3) {
    throw DomainError("Sobolev order must be in 0..3, got " + std::to_string(order));
  }
  if (!(p >= 1.0)) throw DomainError("Sobolev exponent must be >= 1");
  double norm = lp_norm(field, p);
  GridField d = field;
  for (int j = 1; j <= order; ++j) {
    d = periodic_diff(d);
    norm += lp_norm(d, p);
  }
  return norm;
}

}  // namespace cdlab
