#include "shapeinv/commutators.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "shapeinv/errors.hpp"

namespace shapeinv {

std::vector<Probe> default_probes(const Grid& grid, int count,
                                  std::uint32_t seed) {
  std::mt19937 gen(seed);
  // raw mt19937 output is fixed by the standard; distributions are not
  auto uniform = [&] { return static_cast<double>(gen()) / 4294967296.0; };
  const double extent = grid.x_max() - grid.x_min();
  std::vector<Probe> probes;
  for (int i = 0; i < count; ++i) {
    const double u = uniform();
    const double v = uniform();
    const double slot = (static_cast<double>(i) + u) / static_cast<double>(count);
    probes.push_back({grid.x_min() + extent * (0.2 + 0.6 * slot),
                      extent * (0.02 + 0.01 * v)});
  }
  return probes;
}

GridFunction sample_probe(const Probe& probe, const Grid& grid) {
  GridFunction f(grid, 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = (grid.x(i) - probe.center) / probe.width;
    f[i] = std::exp(-0.5 * t * t);
  }
  return f;
}

LabelWindow default_window(const SuperpotentialModel& model, int count) {
  return {model.first_label(), model.first_label() + count - 1};
}

double CommutatorReport::residual(const std::string& name) const {
  for (const auto& [n, r] : residuals)
    if (n == name) return r;
  throw std::out_of_range("no identity named '" + name + "'");
}

double CommutatorReport::max_residual() const {
  double worst = 0.0;
  for (const auto& [n, r] : residuals) worst = std::max(worst, r);
  return worst;
}

namespace {

double worst_ratio(const LabeledStateBundle& b, double norm) {
  double worst = 0.0;
  for (int k = b.k_lo(); k <= b.k_hi(); ++k)
    worst = std::max(worst, l2_norm(b.at(k)) / norm);
  return worst;
}

// Applies `op` n times.
template <class Op>
LabeledStateBundle power(Op op, int n, LabeledStateBundle b) {
  for (int i = 0; i < n; ++i) b = op(b);
  return b;
}

}  // namespace

CommutatorReport commutator_suite(const SuperpotentialModel& model,
                                  const Grid& grid, LabelWindow window,
                                  const std::vector<Probe>& probes) {
  if (window.size() < 4)
    throw WindowExhausted("commutator identities need at least four labels");
  if (window.lo < 0) throw WindowExhausted("labels must be non-negative");
  if (probes.empty()) throw std::invalid_argument("no probe states");

  const auto& m = model;
  auto up = [&](const LabeledStateBundle& b) { return raise(m, b); };
  auto down = [&](const LabeledStateBundle& b) { return lower(m, b); };
  auto ham = [&](const LabeledStateBundle& b) { return hamiltonian(m, b); };
  auto rem = [&](int j, const LabeledStateBundle& b) {
    return multiply_remainder(m, j, b);
  };
  // sum_{i=1}^{n} R(a_i)
  auto rem_sum = [&](int n, const LabeledStateBundle& b) {
    LabeledStateBundle acc = rem(1, b);
    for (int i = 2; i <= n; ++i) acc = acc + rem(i, b);
    return acc;
  };
  const double c = model.units().ladder_scale();

  std::vector<std::string> names{
      "factorization_commutator", "ladder_commutator",
      "remainder_shift_raise",    "remainder_shift_lower",
      "hamiltonian_raise_1",      "hamiltonian_raise_2",
      "hamiltonian_lower_1",      "hamiltonian_lower_2",
      "raise_remainder_bracket",  "bracket_chain_step"};
  std::vector<double> worst(names.size(), 0.0);

  CommutatorReport report;
  report.window = window;
  report.probe_count = static_cast<int>(probes.size());
  std::vector<double> coef_num(static_cast<std::size_t>(window.size()), 0.0);
  std::vector<double> coef_den(static_cast<std::size_t>(window.size()), 0.0);

  // sequential over probes: fixed reduction order
  for (const Probe& probe : probes) {
    const GridFunction phi = sample_probe(probe, grid);
    const double norm = l2_norm(phi);
    const auto p = LabeledStateBundle::constant(phi, window.lo, window.hi);
    std::size_t idx = 0;
    auto record = [&](const LabeledStateBundle& diff) {
      worst[idx] = std::max(worst[idx], worst_ratio(diff, norm));
      ++idx;
    };

    // [A, A^dagger] = 2 (hbar/sqrt(2m)) W'
    {
      std::vector<GridFunction> diffs;
      for (int k = window.lo; k <= window.hi; ++k) {
        const GridFunction aad = apply_A(m, k + 1, apply_Adag(m, k + 1, phi));
        const GridFunction ada = apply_Adag(m, k + 1, apply_A(m, k + 1, phi));
        const Expr dw = differentiate(superpotential_at(m, k + 1), "x");
        const GridFunction w1(grid, eval_on(dw, {}, grid.points()));
        GridFunction rhs(grid, 0.0);
        for (std::size_t i = 0; i < grid.size(); ++i)
          rhs[i] = 2.0 * c * w1[i] * phi[i];
        diffs.push_back(aad - ada - rhs);
      }
      record(LabeledStateBundle(window.lo, std::move(diffs)));
    }
    // [B-, B+] = R(a_0)
    record(down(up(p)) - up(down(p)) - rem(0, p));
    // R(a_n) B+ = B+ R(a_{n-1}), n = 1, 2
    {
      LabeledStateBundle d1 = rem(1, up(p)) - up(rem(0, p));
      LabeledStateBundle d2 = rem(2, up(p)) - up(rem(1, p));
      worst[idx] = std::max({worst[idx], worst_ratio(d1, norm), worst_ratio(d2, norm)});
      ++idx;
    }
    // R(a_n) B- = B- R(a_{n+1}), n = 1, 2
    {
      LabeledStateBundle d1 = rem(1, down(p)) - down(rem(2, p));
      LabeledStateBundle d2 = rem(2, down(p)) - down(rem(3, p));
      worst[idx] = std::max({worst[idx], worst_ratio(d1, norm), worst_ratio(d2, norm)});
      ++idx;
    }
    // [H, B+^n] = (R(a_1) + ... + R(a_n)) B+^n
    for (int n = 1; n <= 2; ++n) {
      const auto bn = power(up, n, p);
      record(ham(bn) - power(up, n, ham(p)) - rem_sum(n, bn));
    }
    // [H, B-^n] = -B-^n (R(a_1) + ... + R(a_n))
    for (int n = 1; n <= 2; ++n) {
      const auto bn = power(down, n, p);
      record(ham(bn) - power(down, n, ham(p)) + power(down, n, rem_sum(n, p)));
    }
    // [B+, R(a_0)] = (R(a_1) - R(a_0)) B+
    const auto bracket = up(rem(0, p)) - rem(0, up(p));
    record(bracket - (rem(1, up(p)) - rem(0, up(p))));
    // [B+, D] = (R(a_2) - 2 R(a_1) + R(a_0)) B+ with D = R(a_1) - R(a_0)
    {
      auto step = [&](const LabeledStateBundle& b) { return rem(1, b) - rem(0, b); };
      const auto chain = up(step(p)) - step(up(p));
      const auto second = rem(2, up(p)) - 2.0 * rem(1, up(p)) + rem(0, up(p));
      record(chain - second);
      report.chain_closure =
          std::max(report.chain_closure, worst_ratio(chain, norm));
    }
    // least-squares coefficient of B+ in [B+, R(a_0)]
    const auto bp = up(p);
    for (int k = bracket.k_lo(); k <= bracket.k_hi(); ++k) {
      const auto slot = static_cast<std::size_t>(k - window.lo);
      coef_num[slot] += dot(bracket.at(k), bp.at(k));
      coef_den[slot] += dot(bp.at(k), bp.at(k));
    }
  }

  for (std::size_t i = 0; i < names.size(); ++i)
    report.residuals.emplace_back(names[i], worst[i]);
  for (std::size_t i = 0; i < coef_num.size(); ++i)
    if (coef_den[i] > 0.0) report.raise_remainder_coefficients.push_back(coef_num[i] / coef_den[i]);
  return report;
}

GeneratorBrackets generator_brackets(const SuperpotentialModel& model,
                                     const Grid& grid, LabelWindow window,
                                     const std::vector<Probe>& probes) {
  if (!model.generators())
    throw ModelError("model has no generator normalization");
  if (window.size() < 3)
    throw WindowExhausted("generator brackets need at least three labels");
  const double k0 = model.generators()->k0;
  const double kpm = model.generators()->kpm;
  auto up = [&](const LabeledStateBundle& b) { return kpm * raise(model, b); };
  auto down = [&](const LabeledStateBundle& b) { return kpm * lower(model, b); };
  auto zero = [&](const LabeledStateBundle& b) {
    return k0 * multiply_remainder(model, 0, b);
  };

  struct Fit {
    std::vector<LabeledStateBundle> lhs, rhs;
    std::vector<double> norms;
    double num = 0.0, den = 0.0;
  } first, second;
  for (const Probe& probe : probes) {
    const GridFunction phi = sample_probe(probe, grid);
    const auto p = LabeledStateBundle::constant(phi, window.lo, window.hi);
    const double norm = l2_norm(phi);
    // [K0, K+] against K+
    auto x1 = zero(up(p)) - up(zero(p));
    auto y1 = up(p);
    // [K+, K-] against K0
    auto x2 = up(down(p)) - down(up(p));
    auto y2 = zero(p);
    for (int k = x1.k_lo(); k <= x1.k_hi(); ++k) {
      first.num += dot(x1.at(k), y1.at(k));
      first.den += dot(y1.at(k), y1.at(k));
    }
    for (int k = x2.k_lo(); k <= x2.k_hi(); ++k) {
      second.num -= dot(x2.at(k), y2.at(k));
      second.den += dot(y2.at(k), y2.at(k));
    }
    first.lhs.push_back(std::move(x1));
    first.rhs.push_back(std::move(y1));
    second.lhs.push_back(std::move(x2));
    second.rhs.push_back(std::move(y2));
    first.norms.push_back(norm);
    second.norms.push_back(norm);
  }

  GeneratorBrackets out;
  out.k0_kplus = first.num / first.den;
  out.kplus_kminus = second.num / second.den;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    out.k0_kplus_residual = std::max(
        out.k0_kplus_residual,
        worst_ratio(first.lhs[i] - first.rhs[i], first.norms[i]));
    out.kplus_kminus_residual = std::max(
        out.kplus_kminus_residual,
        worst_ratio(second.lhs[i] + out.kplus_kminus * second.rhs[i],
                    second.norms[i]));
  }
  return out;
}

}  // namespace shapeinv
