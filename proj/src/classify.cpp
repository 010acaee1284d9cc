#include "shapeinv/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "shapeinv/errors.hpp"

namespace shapeinv {

std::string_view to_string(AlgebraClass c) {
  switch (c) {
    case AlgebraClass::HeisenbergWeyl: return "heisenberg_weyl";
    case AlgebraClass::SU2: return "su2";
    case AlgebraClass::SU11: return "su11";
    case AlgebraClass::InfiniteDimensional: return "infinite";
    case AlgebraClass::Degenerate: return "degenerate";
  }
  return "?";
}

AlgebraClassification classify(const SuperpotentialModel& model, int n_samples,
                               double tol, const std::optional<Grid>& grid) {
  if (n_samples < 4) throw std::invalid_argument("classification needs n_samples >= 4");
  AlgebraClassification out;
  out.generator_scales = model.generators();
  for (int n = 1; n <= n_samples + 1; ++n)
    out.remainders.push_back(remainder(model, n, grid));

  const auto& r = out.remainders;
  const bool all_zero =
      std::all_of(r.begin(), r.end(), [&](double v) { return std::abs(v) <= tol; });
  const double d1 = r[1] - r[0];
  for (int n = 1; n <= n_samples; ++n) {
    const double dn = r[static_cast<std::size_t>(n)] - r[static_cast<std::size_t>(n - 1)];
    out.constancy_residual = std::max(out.constancy_residual, std::abs(dn - d1));
  }
  if (all_zero) {
    out.algebra = AlgebraClass::Degenerate;
    return out;
  }
  out.beta = 0.5 * d1;
  out.delta = r[0] - out.beta;
  if (out.constancy_residual > tol * std::max(1.0, std::abs(r[0]))) {
    out.algebra = AlgebraClass::InfiniteDimensional;
    return out;
  }
  if (std::abs(out.beta) <= tol * std::max(1.0, std::abs(r[0])))
    out.algebra = AlgebraClass::HeisenbergWeyl;
  else
    out.algebra = out.beta < 0.0 ? AlgebraClass::SU11 : AlgebraClass::SU2;

  if (out.generator_scales && out.algebra != AlgebraClass::HeisenbergWeyl) {
    const auto& s = *out.generator_scales;
    // [R(a_0), B+] = -2 beta B+ and [B+, B-] = -R(a_0)
    out.structure_constants =
        StructureConstants{-2.0 * out.beta * s.k0, -s.kpm * s.kpm / s.k0};
  }
  return out;
}

FiniteFormCheck finite_form_check(const Expr& f, const Expr& g, double eta,
                                  double a1, const Grid& grid,
                                  const UnitSystem& units) {
  for (const Expr* e : {&f, &g}) {
    for (const auto& v : free_variables(*e))
      if (v != "x") throw ModelError("f and g may depend on x only, found '" + v + "'");
  }
  if (eta == 0.0) throw ModelError("translation step must be nonzero");
  const double c = units.ladder_scale();
  const Expr k39 = fold(Expr::constant(eta * c) * differentiate(f, "x") -
                        Expr::constant(eta * eta) * f * f);
  const Expr k40 = fold(Expr::constant(c) * differentiate(g, "x") -
                        Expr::constant(eta) * f * g);
  const std::vector<double> xs = grid.points();
  auto range = [&](const Expr& e) {
    const auto v = eval_on(e, {}, xs);
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return std::pair{0.5 * (*lo + *hi), *hi - *lo};
  };
  FiniteFormCheck out;
  std::tie(out.beta_midrange, out.beta_residual) = range(k39);
  std::tie(out.constant_midrange, out.constant_residual) = range(k40);
  out.implied_delta = 2.0 * (out.constant_midrange - out.beta_midrange * a1 / eta);
  return out;
}

}  // namespace shapeinv
