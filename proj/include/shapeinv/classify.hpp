#pragma once

// Classification of the shape-invariance algebra from the remainder
// sequence, and the structural test for superpotentials W = f(x) a + g(x).

#include <optional>
#include <string_view>
#include <vector>

#include "shapeinv/models.hpp"

namespace shapeinv {

enum class AlgebraClass { HeisenbergWeyl, SU2, SU11, InfiniteDimensional, Degenerate };

/// "heisenberg_weyl", "su2", "su11", "infinite", "degenerate"
std::string_view to_string(AlgebraClass c);

struct StructureConstants {
  double k0_kplus = 0.0;      // [K0, K+] = k0_kplus K+
  double kplus_kminus = 0.0;  // [K+, K-] = kplus_kminus K0
};

struct AlgebraClassification {
  AlgebraClass algebra = AlgebraClass::Degenerate;
  double beta = 0.0;
  double delta = 0.0;
  double constancy_residual = 0.0;
  std::vector<double> remainders;  // R(a_1) .. R(a_{n_samples+1})
  std::optional<GeneratorScales> generator_scales;
  // Implied by beta and the generator scales for SU(2) / SU(1,1) models.
  std::optional<StructureConstants> structure_constants;
};

/// d_n = R(a_{n+1}) - R(a_n) for n = 1..n_samples. Degenerate when every R
/// vanishes; infinite-dimensional when max |d_n - d_1| exceeds
/// tol * max(1, |R(a_1)|); otherwise beta = d_1 / 2 picks Heisenberg-Weyl
/// (beta = 0), SU(1,1) (beta < 0) or SU(2) (beta > 0). Uses only remainder
/// values, never eigenvectors.
AlgebraClassification classify(const SuperpotentialModel& model,
                               int n_samples = 8, double tol = 1e-9,
                               const std::optional<Grid>& grid = std::nullopt);

struct FiniteFormCheck {
  // (eta hbar/sqrt(2m)) f' - eta^2 f^2
  double beta_midrange = 0.0;
  double beta_residual = 0.0;  // max - min over the grid
  // (hbar/sqrt(2m)) g' - eta f g
  double constant_midrange = 0.0;
  double constant_residual = 0.0;
  // delta read off the second condition given a_1
  double implied_delta = 0.0;

  bool holds(double tol) const {
    return beta_residual <= tol && constant_residual <= tol;
  }
};

/// f and g must depend on x only. Throws DomainError from evaluation.
FiniteFormCheck finite_form_check(const Expr& f, const Expr& g, double eta,
                                  double a1, const Grid& grid,
                                  const UnitSystem& units = {});

}  // namespace shapeinv
