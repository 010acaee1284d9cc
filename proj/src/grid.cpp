#include "shapeinv/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "shapeinv/errors.hpp"

namespace shapeinv {

Grid::Grid(double x_min, double x_max, std::size_t n)
    : x_min_(x_min), x_max_(x_max), n_(n) {
  if (!(std::isfinite(x_min) && std::isfinite(x_max) && x_min < x_max))
    throw std::invalid_argument("grid requires x_min < x_max");
  if (n < kMinPoints)
    throw std::invalid_argument("grid requires at least 16 points");
  h_ = (x_max - x_min) / static_cast<double>(n - 1);
}

Grid Grid::open_left(double r_max, std::size_t n) {
  if (!(r_max > 0.0)) throw std::invalid_argument("half-line grid needs r_max > 0");
  if (n < kMinPoints)
    throw std::invalid_argument("grid requires at least 16 points");
  return Grid(r_max / static_cast<double>(n), r_max, n);
}

Grid Grid::parse(const std::string& spec) {
  const auto first = spec.find(':');
  const auto second = first == std::string::npos ? first : spec.find(':', first + 1);
  if (second == std::string::npos || spec.find(':', second + 1) != std::string::npos)
    throw std::invalid_argument("grid must look like min:max:n, got '" + spec + "'");
  auto number = [&](std::size_t b, std::size_t e) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(spec.data() + b, spec.data() + e, v);
    if (ec != std::errc() || p != spec.data() + e || b == e)
      throw std::invalid_argument("bad number in grid '" + spec + "'");
    return v;
  };
  const double lo = number(0, first);
  const double hi = number(first + 1, second);
  std::size_t n = 0;
  auto [p, ec] = std::from_chars(spec.data() + second + 1, spec.data() + spec.size(), n);
  if (ec != std::errc() || p != spec.data() + spec.size() || second + 1 == spec.size())
    throw std::invalid_argument("grid point count must be an integer in '" + spec + "'");
  return Grid(lo, hi, n);
}

double Grid::x(std::size_t i) const {
  if (i + 1 == n_) return x_max_;
  return x_min_ + static_cast<double>(i) * h_;
}

std::vector<double> Grid::points() const {
  std::vector<double> xs(n_);
  for (std::size_t i = 0; i < n_; ++i) xs[i] = x(i);
  return xs;
}

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw std::invalid_argument("grid function length does not match grid");
}

GridFunction::GridFunction(Grid grid, double fill)
    : grid_(grid), values_(grid.size(), fill) {}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  if (!(grid_ == o.grid_)) throw GridMismatch();
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
  if (!(grid_ == o.grid_)) throw GridMismatch();
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(double s, GridFunction a) { return a *= s; }

GridFunction derivative(const GridFunction& f, LeftEdge left) {
  const std::size_t n = f.size();
  const double h = f.grid().spacing();
  GridFunction d(f.grid(), 0.0);
  if (left == LeftEdge::ZeroNeighbour)
    d[0] = f[1] / (2.0 * h);
  else
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return d;
}

double trapezoid(const GridFunction& f) {
  const std::size_t n = f.size();
  double sum = 0.5 * (f[0] + f[n - 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) sum += f[i];
  return sum * f.grid().spacing();
}

double dot(const GridFunction& f, const GridFunction& g) {
  if (!(f.grid() == g.grid())) throw GridMismatch();
  const std::size_t n = f.size();
  double sum = 0.5 * (f[0] * g[0] + f[n - 1] * g[n - 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) sum += f[i] * g[i];
  return sum * f.grid().spacing();
}

double l2_norm(const GridFunction& f) { return std::sqrt(dot(f, f)); }

int count_nodes(const GridFunction& f, double rel_floor) {
  double peak = 0.0;
  for (double v : f.values()) peak = std::max(peak, std::abs(v));
  const double floor = rel_floor * peak;
  int nodes = 0;
  int last_sign = 0;
  for (double v : f.values()) {
    if (std::abs(v) <= floor) continue;
    const int s = v > 0.0 ? 1 : -1;
    if (last_sign != 0 && s != last_sign) ++nodes;
    last_sign = s;
  }
  return nodes;
}

}  // namespace shapeinv
