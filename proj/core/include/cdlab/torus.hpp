#pragma once

// Discrete calculus on the uniform periodic partition of the unit torus [0,1).

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace cdlab {

/// Uniform partition of the unit torus into n cells of width 1/n.
class Grid {
 public:
  static constexpr std::size_t kMinCells = 8;

  explicit Grid(std::size_t n_cells);

  std::size_t size() const noexcept { return n_; }
  double dx() const noexcept { return dx_; }
  /// Cell center (i + 1/2) dx.
  double center(std::size_t i) const noexcept { return (static_cast<double>(i) + 0.5) * dx_; }
  /// Right face of cell i, i.e. the point (i + 1) dx between cells i and i+1.
  double face(std::size_t i) const noexcept { return static_cast<double>(i + 1) * dx_; }
  std::vector<double> centers() const;

  bool operator==(const Grid& other) const noexcept { return n_ == other.n_; }

 private:
  std::size_t n_;
  double dx_;
};

/// Cell values of a function on the torus. Always finite, length == grid size.
class GridField {
 public:
  GridField(Grid grid, std::vector<double> values);

  static GridField constant(const Grid& grid, double value);
  static GridField sample(const Grid& grid, const std::function<double(double)>& fn);
  static GridField zeros(const Grid& grid) { return constant(grid, 0.0); }

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  /// Periodic access: index taken modulo the grid size.
  double wrap(std::ptrdiff_t i) const noexcept;

  GridField map(const std::function<double(double)>& fn) const;

  GridField& operator+=(const GridField& rhs);
  GridField& operator-=(const GridField& rhs);
  GridField& operator*=(const GridField& rhs);
  GridField& operator*=(double s);
  GridField& operator+=(double c);

 private:
  Grid grid_;
  std::vector<double> values_;
};

GridField operator+(GridField lhs, const GridField& rhs);
GridField operator-(GridField lhs, const GridField& rhs);
GridField operator*(GridField lhs, const GridField& rhs);
GridField operator*(double s, GridField f);
GridField operator+(GridField f, double c);

/// Sentinel exponent for the sup norm.
inline constexpr double kInfExponent = std::numeric_limits<double>::infinity();

/// Centered difference (u[i+1] - u[i-1]) / (2 dx) with periodic wrap.
GridField periodic_diff(const GridField& field);

/// Midpoint rule dx * sum(u).
double quadrature(const GridField& field);

/// sum |u[i+1] - u[i]| including the wrap-around edge.
double total_variation(const GridField& field);

/// Discrete L^p norm; p == kInfExponent gives max |u|.
double lp_norm(const GridField& field, double p);

/// Discrete W^{k,p} norm: sum over j <= k of the L^p norm of the j-fold periodic_diff.
/// Throws DomainError for k outside 0..3 or p < 1.
double sobolev_norm(const GridField& field, int order, double p);

}  // namespace cdlab
