#pragma once

// Bound-state energies from partial sums of remainders, E_n = R(a_1) + ... +
// R(a_n), measured from the ground state.

#include <optional>
#include <vector>

#include "shapeinv/models.hpp"

namespace shapeinv {

struct SpectrumOptions {
  // Grid for custom-model remainders and normalizability checks; the model's
  // default grid when absent.
  std::optional<Grid> grid;
  double bound_tolerance = 1e-12;
};

struct SpectrumLevel {
  int n = 0;
  double energy = 0.0;
  std::optional<double> remainder;  // R(a_n); absent for the ground level
};

struct SpectrumReport {
  std::vector<SpectrumLevel> levels;
  int bound_count = 0;
  // True when emission stopped at the edge of the bound spectrum rather
  // than at the requested level count.
  bool exhausted = false;
  // E_n = beta n^2 + delta n + gamma fitted from the first three levels.
  std::optional<double> beta;
  std::optional<double> delta;
  double gamma = 0.0;
};

/// Emits up to `max_levels` levels (n = 0, 1, ...). Level n >= 1 is emitted
/// while R(a_n) exceeds the bound tolerance and the ground state at a_{n+1},
/// from which the level is built, is normalizable.
SpectrumReport spectrum(const SuperpotentialModel& model, int max_levels,
                        const SpectrumOptions& options = {});

/// Whether the ground state at parameters a_n is normalizable: closed-form
/// condition when the model has one, grid check otherwise.
bool ground_state_normalizable(const SuperpotentialModel& model, int n,
                               const std::optional<Grid>& grid = std::nullopt);

struct GrowthCheck {
  bool ok = true;
  double bound_constant = 0.0;  // max E_n / n^2 over n >= 1
};

/// Tests E_n <= C n^2. A violation is flagged when the second differences
/// of E_n are non-negative and strictly growing, i.e. the levels grow faster
/// than quadratically. Needs at least two levels.
GrowthCheck growth_check(const SpectrumReport& report);

}  // namespace shapeinv
