#pragma once

// Numerical verification of the operator algebra on labeled probe states.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "shapeinv/grid.hpp"
#include "shapeinv/ladder.hpp"
#include "shapeinv/models.hpp"

namespace shapeinv {

struct Probe {
  double center = 0.0;
  double width = 1.0;
};

/// Gaussian bumps with stratified centers over the middle 60% of the grid and
/// widths between 2% and 3% of its extent, drawn from a fixed-seed mt19937.
std::vector<Probe> default_probes(const Grid& grid, int count = 5,
                                  std::uint32_t seed = 1997);

GridFunction sample_probe(const Probe& probe, const Grid& grid);

struct LabelWindow {
  int lo = 0;
  int hi = 4;
  int size() const { return hi - lo + 1; }
};

/// `count` labels starting at the model's first admissible label.
LabelWindow default_window(const SuperpotentialModel& model, int count = 5);

struct CommutatorReport {
  LabelWindow window;
  int probe_count = 0;
  // identity name -> max over probes and labels of |(LHS - RHS) phi| / |phi|
  std::vector<std::pair<std::string, double>> residuals;
  // max |[B+, R(a_1) - R(a_0)] phi| / |phi|; zero iff the bracket chain closes
  double chain_closure = 0.0;
  // least-squares c in [B+, R(a_0)] = c B+, one entry per label
  std::vector<double> raise_remainder_coefficients;

  double residual(const std::string& name) const;
  double max_residual() const;
};

/// Evaluates every commutator identity of the shape-invariance algebra on the
/// probes placed at each label of the window. Throws WindowExhausted for
/// windows narrower than four labels.
CommutatorReport commutator_suite(const SuperpotentialModel& model,
                                  const Grid& grid, LabelWindow window,
                                  const std::vector<Probe>& probes);

/// Observed brackets of K0 = k0 R(a_0) and K+- = kpm B+-.
struct GeneratorBrackets {
  double k0_kplus = 0.0;           // c in [K0, K+] = c K+
  double k0_kplus_residual = 0.0;  // against c = +1
  double kplus_kminus = 0.0;       // c in [K+, K-] = -c K0
  double kplus_kminus_residual = 0.0;
};

/// Requires model.generators(). Residuals are relative to |phi|.
GeneratorBrackets generator_brackets(const SuperpotentialModel& model,
                                     const Grid& grid, LabelWindow window,
                                     const std::vector<Probe>& probes);

}  // namespace shapeinv
