#include "shapeinv/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "shapeinv/errors.hpp"

namespace shapeinv {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check(const TridiagonalMatrix& m) {
  if (m.diagonal.empty()) throw std::invalid_argument("empty matrix");
  if (m.off_diagonal.size() + 1 != m.diagonal.size())
    throw std::invalid_argument("off-diagonal must have length n-1");
  for (double v : m.diagonal)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite matrix entry");
  for (double v : m.off_diagonal)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite matrix entry");
}

double pivot_floor(const TridiagonalMatrix& m) {
  double e2max = 0.0;
  for (double e : m.off_diagonal) e2max = std::max(e2max, e * e);
  return std::max(std::numeric_limits<double>::min(),
                  std::numeric_limits<double>::min() * e2max);
}

double inf_norm(const TridiagonalMatrix& m) {
  const std::size_t n = m.size();
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(m.diagonal[i]);
    if (i > 0) row += std::abs(m.off_diagonal[i - 1]);
    if (i + 1 < n) row += std::abs(m.off_diagonal[i]);
    best = std::max(best, row);
  }
  return best;
}

// LU factorization of (m - shift I) with partial pivoting, LAPACK dgttrf
// layout: multipliers in `lower`, U in `diag`, `upper`, `upper2`.
struct Factorization {
  std::vector<double> lower, diag, upper, upper2;
  std::vector<bool> swapped;

  Factorization(const TridiagonalMatrix& m, double shift, double tiny) {
    const std::size_t n = m.size();
    diag.resize(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = m.diagonal[i] - shift;
    lower = m.off_diagonal;
    upper = m.off_diagonal;
    upper2.assign(n > 2 ? n - 2 : 0, 0.0);
    swapped.assign(n > 1 ? n - 1 : 0, false);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::abs(diag[i]) >= std::abs(lower[i])) {
        if (diag[i] == 0.0) diag[i] = tiny;
        const double fact = lower[i] / diag[i];
        lower[i] = fact;
        diag[i + 1] -= fact * upper[i];
      } else {
        const double fact = diag[i] / lower[i];
        diag[i] = lower[i];
        lower[i] = fact;
        const double temp = upper[i];
        upper[i] = diag[i + 1];
        diag[i + 1] = temp - fact * diag[i + 1];
        if (i + 2 < n) {
          upper2[i] = upper[i + 1];
          upper[i + 1] = -fact * upper[i + 1];
        }
        swapped[i] = true;
      }
    }
    for (double& d : diag)
      if (d == 0.0) d = tiny;
  }

  void solve(std::vector<double>& b) const {
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!swapped[i]) {
        b[i + 1] -= lower[i] * b[i];
      } else {
        const double temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - lower[i] * b[i];
      }
    }
    b[n - 1] /= diag[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - upper[n - 2] * b[n - 1]) / diag[n - 2];
    for (std::size_t i = n >= 3 ? n - 3 : 0; n >= 3; --i) {
      b[i] = (b[i] - upper[i] * b[i + 1] - upper2[i] * b[i + 2]) / diag[i];
      if (i == 0) break;
    }
  }
};

double weighted_norm(const std::vector<double>& v, double spacing) {
  const std::size_t n = v.size();
  if (n == 1) return std::abs(v[0]) * std::sqrt(spacing);
  double sum = 0.5 * (v.front() * v.front() + v.back() * v.back());
  for (std::size_t i = 1; i + 1 < n; ++i) sum += v[i] * v[i];
  return std::sqrt(sum * spacing);
}

double weighted_dot(const std::vector<double>& a, const std::vector<double>& b,
                    double spacing) {
  const std::size_t n = a.size();
  if (n == 1) return a[0] * b[0] * spacing;
  double sum = 0.5 * (a.front() * b.front() + a.back() * b.back());
  for (std::size_t i = 1; i + 1 < n; ++i) sum += a[i] * b[i];
  return sum * spacing;
}

void fix_sign(std::vector<double>& v) {
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  for (double x : v) {
    if (std::abs(x) > 1e-8 * peak) {
      if (x < 0.0)
        for (double& y : v) y = -y;
      return;
    }
  }
}

}  // namespace

std::size_t count_below(const TridiagonalMatrix& m, double shift) {
  const double floor = pivot_floor(m);
  std::size_t count = 0;
  double q = m.diagonal[0] - shift;
  for (std::size_t i = 0;; ++i) {
    if (std::abs(q) < floor) q = -floor;
    if (q < 0.0) ++count;
    if (i + 1 == m.size()) break;
    const double e = m.off_diagonal[i];
    q = m.diagonal[i + 1] - shift - e * e / q;
  }
  return count;
}

EigenPairs eigs_lowest(const TridiagonalMatrix& m, std::size_t k) {
  check(m);
  const std::size_t n = m.size();
  if (k > n) throw std::invalid_argument("requested more eigenvalues than rows");
  EigenPairs out;
  if (k == 0) return out;

  // Gershgorin enclosure
  double lo_bound = std::numeric_limits<double>::infinity();
  double hi_bound = -lo_bound;
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(m.off_diagonal[i - 1]);
    if (i + 1 < n) radius += std::abs(m.off_diagonal[i]);
    lo_bound = std::min(lo_bound, m.diagonal[i] - radius);
    hi_bound = std::max(hi_bound, m.diagonal[i] + radius);
  }
  const double norm = std::max(inf_norm(m), std::numeric_limits<double>::min());
  const double pad = 2.0 * kEps * norm + pivot_floor(m);
  lo_bound -= pad;
  hi_bound += pad;

  constexpr int kMaxBisection = 400;
  double floor = lo_bound;
  for (std::size_t j = 0; j < k; ++j) {
    double lo = floor;
    double hi = hi_bound;
    int it = 0;
    for (; it < kMaxBisection; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (hi - lo <= 2.0 * kEps * std::max(std::abs(lo), std::abs(hi))) break;
      if (count_below(m, mid) > j)
        hi = mid;
      else
        lo = mid;
    }
    if (it == kMaxBisection)
      throw ConvergenceError("eigenvalue bisection did not converge", it);
    out.values.push_back(0.5 * (lo + hi));
    floor = lo;
  }

  // inverse iteration
  const double tiny = kEps * norm;
  const double cluster = 1e-3 * norm;
  constexpr int kMaxInverse = 40;
  for (std::size_t j = 0; j < k; ++j) {
    const double lambda = out.values[j];
    const Factorization lu(m, lambda + tiny, tiny);
    std::vector<double> v(n);
    std::uint64_t state = 0x9E3779B97F4A7C15ULL + j;
    for (double& x : v) {
      state = state * 6364136223846793005ULL + 1442695040888963407ULL;
      x = 0.5 + static_cast<double>(state >> 11) * 0x1.0p-53;
    }
    auto orthogonalize = [&](std::vector<double>& x) {
      for (std::size_t i = 0; i < j; ++i) {
        if (std::abs(out.values[i] - lambda) > cluster) continue;
        const double c = weighted_dot(x, out.vectors[i], m.spacing);
        for (std::size_t t = 0; t < n; ++t) x[t] -= c * out.vectors[i][t];
      }
    };
    orthogonalize(v);
    double scale = weighted_norm(v, m.spacing);
    for (double& x : v) x /= scale;

    bool converged = false;
    int it = 0;
    for (; it < kMaxInverse && !converged; ++it) {
      std::vector<double> next = v;
      lu.solve(next);
      orthogonalize(next);
      scale = weighted_norm(next, m.spacing);
      if (!(scale > 0.0) || !std::isfinite(scale))
        throw ConvergenceError("inverse iteration broke down", it + 1);
      for (double& x : next) x /= scale;
      double same = 0.0;
      double flip = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        same = std::max(same, std::abs(next[t] - v[t]));
        flip = std::max(flip, std::abs(next[t] + v[t]));
      }
      double peak = 0.0;
      for (double x : next) peak = std::max(peak, std::abs(x));
      converged = it >= 1 && std::min(same, flip) <= 1e-12 * peak;
      v = std::move(next);
    }
    if (!converged)
      throw ConvergenceError("inverse iteration did not converge", it);
    fix_sign(v);
    out.vectors.push_back(std::move(v));
  }
  return out;
}

}  // namespace shapeinv
