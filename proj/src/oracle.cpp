#include "shapeinv/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>

#include "shapeinv/errors.hpp"
#include "shapeinv/ladder.hpp"
#include "shapeinv/spectrum.hpp"

namespace shapeinv {

TridiagonalMatrix build_hamiltonian(const Expr& potential, const Grid& grid,
                                    const UnitSystem& units, Walls walls) {
  const std::size_t skip = walls == Walls::AtEdges ? 1 : 0;
  const std::vector<double> xs = grid.points();
  const std::span<const double> rows(xs.data() + skip, xs.size() - 2 * skip);
  const std::vector<double> v = eval_on(potential, {}, rows);
  const double h = grid.spacing();
  const double c = units.kinetic_scale();
  TridiagonalMatrix m;
  m.spacing = h;
  m.offset = skip;
  m.diagonal.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!std::isfinite(v[i]))
      throw DomainError("potential is not finite at x = " + std::to_string(rows[i]),
                        to_string(potential));
    m.diagonal[i] = 2.0 * c / (h * h) + v[i];
  }
  m.off_diagonal.assign(rows.size() - 1, -c / (h * h));
  return m;
}

TridiagonalMatrix build_hamiltonian(const SuperpotentialModel& model,
                                    const Grid& grid, Partner which, int n) {
  const Walls walls =
      model.domain() == Domain::HalfLine ? Walls::BeyondEdges : Walls::AtEdges;
  return build_hamiltonian(potential(model, which, n), grid, model.units(), walls);
}

GridEigenstates solve_lowest(const TridiagonalMatrix& m, const Grid& grid,
                             std::size_t k) {
  if (m.size() + 2 * m.offset != grid.size()) throw GridMismatch();
  EigenPairs pairs = eigs_lowest(m, k);
  GridEigenstates out;
  out.energies = std::move(pairs.values);
  for (const auto& v : pairs.vectors) {
    GridFunction f(grid, 0.0);
    std::copy(v.begin(), v.end(), f.values().begin() + static_cast<std::ptrdiff_t>(m.offset));
    f *= 1.0 / l2_norm(f);
    out.states.push_back(std::move(f));
  }
  return out;
}

double inner_product(const GridFunction& f, const GridFunction& g) {
  return dot(f, g);
}

ComparisonReport compare(const SuperpotentialModel& model, const Grid& grid,
                         int k) {
  if (k < 1) throw std::invalid_argument("need at least one level");
  const SpectrumReport spec = spectrum(model, k, SpectrumOptions{grid});
  if (spec.bound_count < k) throw LevelUnbound(spec.bound_count);

  const auto eig = solve_lowest(build_hamiltonian(model, grid, Partner::V1),
                                grid, static_cast<std::size_t>(k));
  ComparisonReport report{grid, eig.energies.front(), {}, 0.0, 1.0};
  for (int n = 0; n < k; ++n) {
    const auto idx = static_cast<std::size_t>(n);
    LevelComparison level;
    level.n = n;
    level.algebraic = spec.levels[idx].energy;
    level.numeric_gap = eig.energies[idx] - eig.energies.front();
    level.difference = std::abs(level.numeric_gap - level.algebraic);
    level.overlap =
        std::abs(inner_product(excited_state(model, n, grid), eig.states[idx]));
    report.max_abs_difference = std::max(report.max_abs_difference, level.difference);
    report.min_overlap = std::min(report.min_overlap, level.overlap);
    report.levels.push_back(level);
  }
  return report;
}

}  // namespace shapeinv
