#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace shapeinv {

/// Uniform grid x_i = x_min + i*h, i = 0..n-1, h = (x_max - x_min)/(n - 1).
class Grid {
 public:
  static constexpr std::size_t kMinPoints = 16;

  /// Throws std::invalid_argument unless x_min < x_max and n >= 16.
  Grid(double x_min, double x_max, std::size_t n);

  /// Half-line grid (0, r_max] with n points x_i = (i+1)*r_max/n; the origin
  /// is the implicit Dirichlet neighbour and never a grid point.
  static Grid open_left(double r_max, std::size_t n);

  /// Parses "min:max:n".
  static Grid parse(const std::string& spec);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  std::size_t size() const { return n_; }
  double spacing() const { return h_; }
  double x(std::size_t i) const;
  std::vector<double> points() const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.x_min_ == b.x_min_ && a.x_max_ == b.x_max_ && a.n_ == b.n_;
  }

 private:
  double x_min_;
  double x_max_;
  std::size_t n_;
  double h_;
};

/// Samples of a real function on a grid.
class GridFunction {
 public:
  GridFunction(Grid grid, std::vector<double> values);
  GridFunction(Grid grid, double fill);

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);
  GridFunction& operator*=(double s);

 private:
  Grid grid_;
  std::vector<double> values_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(double s, GridFunction a);

/// How the first point is differentiated: a one-sided second-order stencil,
/// or a central difference against an implicit zero one step to the left
/// (a Dirichlet wall there, as at the origin of an open half-line grid).
enum class LeftEdge { OneSided, ZeroNeighbour };

/// First derivative: central differences inside, second-order one-sided
/// stencil at the right edge, `left` at the left edge.
GridFunction derivative(const GridFunction& f, LeftEdge left = LeftEdge::OneSided);

/// Trapezoid rule for the integral of f over its grid.
double trapezoid(const GridFunction& f);

/// Trapezoid-rule L2 norm.
double l2_norm(const GridFunction& f);

/// Trapezoid-rule <f|g>; throws GridMismatch.
double dot(const GridFunction& f, const GridFunction& g);

/// Sign changes among samples whose magnitude exceeds rel_floor * max|f|.
int count_nodes(const GridFunction& f, double rel_floor = 1e-8);

}  // namespace shapeinv
