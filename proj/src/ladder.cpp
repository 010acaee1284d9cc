#include "shapeinv/ladder.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <stdexcept>

#include "shapeinv/errors.hpp"
#include "shapeinv/spectrum.hpp"

namespace shapeinv {

namespace {

// 5-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 5> kGaussNodes{
    -0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
    0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights{
    0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
    0.4786286704993665, 0.2369268850561891};

GridFunction sample(const Expr& e, const Grid& grid) {
  return GridFunction(grid, eval_on(e, {}, grid.points()));
}

// Half-line states vanish at the origin; on an open grid that starts one
// step away from it the origin is the left neighbour of the first point.
LeftEdge left_edge(const SuperpotentialModel& model, const Grid& grid) {
  if (model.domain() != Domain::HalfLine) return LeftEdge::OneSided;
  const bool open = std::abs(grid.x_min() - grid.spacing()) <= 1e-9 * grid.spacing();
  return open ? LeftEdge::ZeroNeighbour : LeftEdge::OneSided;
}

// Sampled W(x; a_n), memoized per expression and grid. Operator chains apply
// the same few factors many times.
GridFunction sampled_superpotential(const SuperpotentialModel& model, int n,
                                    const Grid& grid) {
  thread_local std::map<std::string, GridFunction> cache;
  const Expr w = superpotential_at(model, n);
  std::string key = to_string(w);
  for (double v : {grid.x_min(), grid.x_max(), static_cast<double>(grid.size())}) {
    key += '|';
    key += std::to_string(v);
  }
  if (auto it = cache.find(key); it != cache.end() && it->second.grid() == grid)
    return it->second;
  if (cache.size() >= 64) cache.clear();
  GridFunction f = sample(w, grid);
  cache.insert_or_assign(key, f);
  return f;
}

// Power p of psi ~ r^p at the origin, p = -lim r W(r) / c, extrapolated linearly from the first two points.
double origin_power(const SuperpotentialModel& model, const Grid& grid,
                    const GridFunction& w) {
  const double f1 = grid.x(0) * w[0];
  const double f2 = grid.x(1) * w[1];
  return -(2.0 * f1 - f2) / model.units().ladder_scale();
}

GridFunction ladder_factor(const SuperpotentialModel& model, int n,
                           const GridFunction& psi, double sign) {
  const Grid& grid = psi.grid();
  const GridFunction w = sampled_superpotential(model, n, grid);
  const double c = model.units().ladder_scale();
  GridFunction out(grid, 0.0);
  const double p = left_edge(model, grid) == LeftEdge::ZeroNeighbour
                       ? origin_power(model, grid, w)
                       : 0.0;
  if (p > 1e-6) {
    // psi' = p psi / r + r^p (psi / r^p)'; the quotient is smooth at the
    // origin, so the stencil does not feed errors into the 1/r terms
    GridFunction g(grid, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = psi[i] / std::pow(grid.x(i), p);
    const GridFunction dg = derivative(g);
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double r = grid.x(i);
      const double d = p * psi[i] / r + std::pow(r, p) * dg[i];
      out[i] = w[i] * psi[i] + sign * c * d;
    }
    return out;
  }
  const GridFunction d = derivative(psi, left_edge(model, grid));
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = w[i] * psi[i] + sign * c * d[i];
  return out;
}

}  // namespace

GridFunction ground_state_at(const SuperpotentialModel& model, int n,
                             const Grid& grid) {
  const std::size_t cells = grid.size() - 1;
  const double h = grid.spacing();
  std::vector<double> nodes;
  nodes.reserve(cells * kGaussNodes.size());
  for (std::size_t i = 0; i < cells; ++i) {
    const double mid = grid.x(i) + 0.5 * h;
    for (double t : kGaussNodes) nodes.push_back(mid + 0.5 * h * t);
  }
  const std::vector<double> w = eval_on(superpotential_at(model, n), {}, nodes);

  // log psi_0 = -(1/c) int_{x_min}^{x} W
  const double c = model.units().ladder_scale();
  std::vector<double> log_psi(grid.size(), 0.0);
  double integral = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    double cell = 0.0;
    for (std::size_t q = 0; q < kGaussNodes.size(); ++q)
      cell += kGaussWeights[q] * w[i * kGaussNodes.size() + q];
    integral += 0.5 * h * cell;
    log_psi[i + 1] = -integral / c;
  }
  const double top = *std::max_element(log_psi.begin(), log_psi.end());
  GridFunction psi(grid, 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i)
    psi[i] = std::exp(log_psi[i] - top);
  psi *= 1.0 / l2_norm(psi);
  return psi;
}

GridFunction ground_state(const SuperpotentialModel& model, const Grid& grid) {
  validate_normalizable(model, grid);
  return ground_state_at(model, 1, grid);
}

GridFunction apply_A(const SuperpotentialModel& model, int n,
                     const GridFunction& psi) {
  return ladder_factor(model, n, psi, +1.0);
}

GridFunction apply_Adag(const SuperpotentialModel& model, int n,
                        const GridFunction& psi) {
  return ladder_factor(model, n, psi, -1.0);
}

GridFunction apply_hamiltonian(const SuperpotentialModel& model, int n,
                               const GridFunction& psi) {
  return apply_Adag(model, n, apply_A(model, n, psi));
}

GridFunction excited_state(const SuperpotentialModel& model, int n,
                           const Grid& grid) {
  if (n < 0) throw std::invalid_argument("level index must be >= 0");
  const SpectrumReport spec = spectrum(model, n + 1, SpectrumOptions{grid});
  if (spec.bound_count <= n) throw LevelUnbound(n);
  if (n == 0) return ground_state(model, grid);

  // u_k = phi_k / |phi_k| for phi_k = A^dagger(a_k) phi_{k+1}, phi_{n+1} the
  // ground state at a_{n+1}. With S_k = R(a_k) + ... + R(a_n),
  //   u_k = ((W_k + W_{k+1}) u_{k+1} - sqrt(S_{k+1}) u_{k+2}) / sqrt(S_k),
  // because c phi'_{k+1} = S_{k+1} phi_{k+2} - W_{k+1} phi_{k+1}.
  std::vector<double> sums(static_cast<std::size_t>(n + 2), 0.0);
  for (int k = n; k >= 1; --k)
    sums[static_cast<std::size_t>(k)] =
        sums[static_cast<std::size_t>(k + 1)] + *spec.levels[static_cast<std::size_t>(k)].remainder;

  GridFunction next = ground_state_at(model, n + 1, grid);  // u_{k+1}
  GridFunction after(grid, 0.0);                            // u_{k+2}
  GridFunction w_next = sampled_superpotential(model, n + 1, grid);
  for (int k = n; k >= 1; --k) {
    const GridFunction w = sampled_superpotential(model, k, grid);
    const double s_k = sums[static_cast<std::size_t>(k)];
    const double s_next = sums[static_cast<std::size_t>(k + 1)];
    GridFunction u(grid, 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i)
      u[i] = ((w[i] + w_next[i]) * next[i] - std::sqrt(s_next) * after[i]) / std::sqrt(s_k);
    after = std::move(next);
    next = std::move(u);
    w_next = w;
  }
  return next;
}

// ---------------------------------------------------------------------------

LabeledStateBundle::LabeledStateBundle(int k_lo, std::vector<GridFunction> states)
    : k_lo_(k_lo), states_(std::move(states)) {
  if (states_.empty()) throw WindowExhausted("empty label window");
  for (const auto& s : states_)
    if (!(s.grid() == states_.front().grid())) throw GridMismatch();
}

LabeledStateBundle LabeledStateBundle::constant(const GridFunction& f, int k_lo,
                                                int k_hi) {
  if (k_hi < k_lo) throw WindowExhausted("empty label window");
  return LabeledStateBundle(
      k_lo, std::vector<GridFunction>(static_cast<std::size_t>(k_hi - k_lo + 1), f));
}

const GridFunction& LabeledStateBundle::at(int k) const {
  if (!contains(k))
    throw std::out_of_range("label " + std::to_string(k) + " outside window");
  return states_[static_cast<std::size_t>(k - k_lo_)];
}

GridFunction& LabeledStateBundle::at(int k) {
  if (!contains(k))
    throw std::out_of_range("label " + std::to_string(k) + " outside window");
  return states_[static_cast<std::size_t>(k - k_lo_)];
}

namespace {

template <class Op>
LabeledStateBundle combine(const LabeledStateBundle& a,
                           const LabeledStateBundle& b, Op op) {
  const int lo = std::max(a.k_lo(), b.k_lo());
  const int hi = std::min(a.k_hi(), b.k_hi());
  if (hi < lo) throw WindowExhausted("label windows do not overlap");
  std::vector<GridFunction> out;
  for (int k = lo; k <= hi; ++k) out.push_back(op(a.at(k), b.at(k)));
  return LabeledStateBundle(lo, std::move(out));
}

}  // namespace

LabeledStateBundle operator+(const LabeledStateBundle& a,
                             const LabeledStateBundle& b) {
  return combine(a, b, [](const GridFunction& f, const GridFunction& g) {
    return f + g;
  });
}

LabeledStateBundle operator-(const LabeledStateBundle& a,
                             const LabeledStateBundle& b) {
  return combine(a, b, [](const GridFunction& f, const GridFunction& g) {
    return f - g;
  });
}

LabeledStateBundle operator*(double s, const LabeledStateBundle& a) {
  std::vector<GridFunction> out;
  for (int k = a.k_lo(); k <= a.k_hi(); ++k) out.push_back(s * a.at(k));
  return LabeledStateBundle(a.k_lo(), std::move(out));
}

LabeledStateBundle raise(const SuperpotentialModel& model,
                         const LabeledStateBundle& bundle) {
  if (bundle.k_hi() == bundle.k_lo())
    throw WindowExhausted("raising needs at least two labels");
  std::vector<GridFunction> out;
  for (int k = bundle.k_lo(); k < bundle.k_hi(); ++k)
    out.push_back(apply_Adag(model, k + 1, bundle.at(k + 1)));
  return LabeledStateBundle(bundle.k_lo(), std::move(out));
}

LabeledStateBundle lower(const SuperpotentialModel& model,
                         const LabeledStateBundle& bundle) {
  if (bundle.k_hi() == bundle.k_lo())
    throw WindowExhausted("lowering needs at least two labels");
  std::vector<GridFunction> out;
  for (int k = bundle.k_lo() + 1; k <= bundle.k_hi(); ++k)
    out.push_back(apply_A(model, k, bundle.at(k - 1)));
  return LabeledStateBundle(bundle.k_lo() + 1, std::move(out));
}

LabeledStateBundle hamiltonian(const SuperpotentialModel& model,
                               const LabeledStateBundle& bundle) {
  std::vector<GridFunction> out;
  for (int k = bundle.k_lo(); k <= bundle.k_hi(); ++k)
    out.push_back(apply_hamiltonian(model, k + 1, bundle.at(k)));
  return LabeledStateBundle(bundle.k_lo(), std::move(out));
}

LabeledStateBundle multiply_remainder(const SuperpotentialModel& model, int j,
                                      const LabeledStateBundle& bundle) {
  std::vector<GridFunction> out;
  for (int k = bundle.k_lo(); k <= bundle.k_hi(); ++k) {
    const double r = remainder(model, k + j, bundle.grid());
    out.push_back(r * bundle.at(k));
  }
  return LabeledStateBundle(bundle.k_lo(), std::move(out));
}

}  // namespace shapeinv
