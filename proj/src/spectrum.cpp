#include "shapeinv/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shapeinv {

bool ground_state_normalizable(const SuperpotentialModel& model, int n,
                               const std::optional<Grid>& grid) {
  if (const auto& cond = model.bound_condition())
    return eval(*cond, parameter_at(model, n)) > 0.0;
  return check_normalizable(model, grid ? *grid : model.default_grid(), n).ok;
}

SpectrumReport spectrum(const SuperpotentialModel& model, int max_levels,
                        const SpectrumOptions& options) {
  if (max_levels < 0) throw std::invalid_argument("level count must be >= 0");
  SpectrumReport report;
  if (max_levels == 0) return report;
  const std::optional<Grid>& grid = options.grid;

  if (!ground_state_normalizable(model, 1, grid)) {
    // E_0 = 0 is kept as the reference level even without a bound state.
    report.levels.push_back({0, 0.0, std::nullopt});
    report.bound_count = 1;
    report.exhausted = true;
    return report;
  }
  report.levels.push_back({0, 0.0, std::nullopt});
  double energy = 0.0;
  for (int n = 1; n < max_levels; ++n) {
    const double r = remainder(model, n, grid);
    if (!(r > options.bound_tolerance) ||
        !ground_state_normalizable(model, n + 1, grid)) {
      report.exhausted = true;
      break;
    }
    energy += r;
    report.levels.push_back({n, energy, r});
  }
  report.bound_count = static_cast<int>(report.levels.size());
  if (report.levels.size() >= 3) {
    const double e1 = report.levels[1].energy;
    const double e2 = report.levels[2].energy;
    report.beta = 0.5 * (e2 - 2.0 * e1);
    report.delta = e1 - *report.beta;
  }
  return report;
}

GrowthCheck growth_check(const SpectrumReport& report) {
  if (report.levels.size() < 2)
    throw std::invalid_argument("growth check needs at least two levels");
  GrowthCheck out;
  for (const auto& level : report.levels) {
    if (level.n == 0) continue;
    const double n = static_cast<double>(level.n);
    out.bound_constant = std::max(out.bound_constant, level.energy / (n * n));
  }
  std::vector<double> second;
  for (std::size_t i = 1; i + 1 < report.levels.size(); ++i)
    second.push_back(report.levels[i + 1].energy -
                     2.0 * report.levels[i].energy +
                     report.levels[i - 1].energy);
  if (second.size() >= 2) {
    const double scale = std::max(1.0, std::abs(report.levels.back().energy));
    const double slack = 1e-12 * scale;
    bool growing = second.front() >= -slack;
    for (std::size_t i = 1; i < second.size(); ++i)
      growing = growing && second[i] >= -slack && second[i] > second[i - 1] + slack;
    out.ok = !growing;
  }
  return out;
}

}  // namespace shapeinv
