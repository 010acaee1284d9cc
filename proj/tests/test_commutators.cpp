#include <gtest/gtest.h>

#include <cmath>

#include "shapeinv/classify.hpp"
#include "shapeinv/commutators.hpp"
#include "shapeinv/errors.hpp"

using namespace shapeinv;

namespace {

SuperpotentialModel morse() {
  return catalog_model(ModelKind::Morse, {{"V0", 1}, {"lambda", 1}, {"b", 3}});
}
SuperpotentialModel scarf() {
  return catalog_model(ModelKind::Scarf, {{"V0", 20}, {"lambda", 1}});
}
SuperpotentialModel harmonic() { return catalog_model(ModelKind::Harmonic, {{"omega", 2}}); }
SuperpotentialModel coulomb() { return catalog_model(ModelKind::Coulomb, {{"l", 0}}); }

CommutatorReport suite(const SuperpotentialModel& m) {
  const Grid g = m.commutator_grid();
  return commutator_suite(m, g, default_window(m), default_probes(g));
}

}  // namespace

TEST(Probes, DeterministicAndInsideTheMiddle) {
  const Grid g(-10, 10, 2001);
  const auto a = default_probes(g);
  const auto b = default_probes(g);
  ASSERT_EQ(a.size(), 5u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].center, b[i].center);
    EXPECT_EQ(a[i].width, b[i].width);
    EXPECT_GE(a[i].center, -6.0);
    EXPECT_LE(a[i].center, 6.0);
    EXPECT_GE(a[i].width, 0.4);
    EXPECT_LE(a[i].width, 0.6);
  }
  EXPECT_NE(default_probes(g, 5, 1).front().center, a.front().center);
}

TEST(Windows, CoulombStartsAboveTheSingularLabel) {
  EXPECT_EQ(default_window(coulomb()).lo, 1);
  EXPECT_EQ(default_window(morse()).lo, 0);
  EXPECT_EQ(default_window(morse(), 5).size(), 5);
}

TEST(Suite, HarmonicAllSmallAndChainVanishes) {
  const auto r = suite(harmonic());
  EXPECT_LE(r.max_residual(), 1e-3);
  EXPECT_EQ(r.residual("raise_remainder_bracket"), 0.0);
  EXPECT_EQ(r.chain_closure, 0.0);
}

TEST(Suite, MorseBracketIsTwiceBetaTimesRaise) {
  const auto r = suite(morse());
  EXPECT_LE(r.max_residual(), 1e-3);
  ASSERT_FALSE(r.raise_remainder_coefficients.empty());
  for (double c : r.raise_remainder_coefficients) EXPECT_NEAR(c, -2.0, 1e-3);
  EXPECT_LE(r.chain_closure, 1e-3);
}

TEST(Suite, ScarfChainCloses) {
  const auto r = suite(scarf());
  EXPECT_LE(r.max_residual(), 1e-3);
  EXPECT_LE(r.chain_closure, 1e-3);
}

TEST(Suite, CoulombChainStaysOpen) {
  const auto r = suite(coulomb());
  EXPECT_LE(r.max_residual(), 1e-3);
  EXPECT_GE(r.chain_closure, 1e-2);
}

TEST(Suite, Reproducible) {
  const auto a = suite(scarf());
  const auto b = suite(scarf());
  EXPECT_EQ(a.residuals, b.residuals);
  EXPECT_EQ(a.chain_closure, b.chain_closure);
}

TEST(Suite, NarrowWindowRejected) {
  const auto m = morse();
  const Grid g = m.default_grid();
  EXPECT_THROW(commutator_suite(m, g, {0, 2}, default_probes(g)), WindowExhausted);
  EXPECT_THROW(suite(m).residual("no_such_identity"), std::out_of_range);
}

TEST(Generators, StructureConstantPattern) {
  for (const auto& m : {morse(), scarf()}) {
    const Grid g = m.commutator_grid();
    const auto b = generator_brackets(m, g, default_window(m), default_probes(g));
    EXPECT_NEAR(b.k0_kplus, 1.0, 1e-3);
    EXPECT_LE(b.k0_kplus_residual, 1e-3);
    EXPECT_GT(b.kplus_kminus, 0.0);
    EXPECT_LE(b.kplus_kminus_residual, 1e-3);
  }
  const Grid g = harmonic().default_grid();
  EXPECT_THROW(generator_brackets(harmonic(), g, {0, 4}, default_probes(g)), ModelError);
}

TEST(Generators, MeasuredConstantsMatchClassification) {
  for (const auto& m : {morse(), scarf()}) {
    const Grid g = m.commutator_grid();
    const auto b = generator_brackets(m, g, default_window(m), default_probes(g));
    const auto c = classify(m);
    ASSERT_TRUE(c.structure_constants.has_value());
    EXPECT_NEAR(c.structure_constants->k0_kplus, b.k0_kplus, 1e-3);
    EXPECT_NEAR(-c.structure_constants->kplus_kminus, b.kplus_kminus, 1e-3);
  }
}

// ---------------------------------------------------------------------------

TEST(Classify, Catalog) {
  const auto h = classify(harmonic());
  EXPECT_EQ(h.algebra, AlgebraClass::HeisenbergWeyl);
  EXPECT_EQ(h.beta, 0.0);
  EXPECT_EQ(h.delta, 2.0);
  const auto mo = classify(morse());
  EXPECT_EQ(mo.algebra, AlgebraClass::SU11);
  EXPECT_EQ(mo.beta, -1.0);
  EXPECT_EQ(mo.delta, 5.0);
  const auto sc = classify(scarf());
  EXPECT_EQ(sc.algebra, AlgebraClass::SU11);
  EXPECT_EQ(sc.beta, -1.0);
  EXPECT_EQ(sc.delta, 8.0);
  EXPECT_EQ(classify(coulomb()).algebra, AlgebraClass::InfiniteDimensional);
  EXPECT_EQ(classify(catalog_model(ModelKind::Constant, {{"c", 1}})).algebra,
            AlgebraClass::Degenerate);
}

TEST(Classify, PositiveBetaIsSU2) {
  // W = -a cot x on (0, pi): R(a) = 2a + 1 grows with a = a_1 + (n - 1)
  const auto m = load_custom_model(R"json({"W": "-a*cos(x)/sin(x)", "params": {"a": 1},
                                       "eta": {"a": 1}, "grid": "0.05:3.09:2001"})json");
  const auto c = classify(m);
  EXPECT_EQ(c.algebra, AlgebraClass::SU2);
  EXPECT_NEAR(c.beta, 1.0, 1e-9);
}

TEST(Classify, GridIndependent) {
  const auto m = load_custom_model(R"json({"W": "a*tanh(x)", "params": {"a": 4}, "eta": {"a": -1}})json");
  const auto coarse = classify(m, 8, 1e-9, Grid(-10, 10, 1001));
  const auto fine = classify(m, 8, 1e-9, Grid(-10, 10, 4001));
  EXPECT_EQ(coarse.algebra, fine.algebra);
  EXPECT_NEAR(coarse.beta, fine.beta, 1e-9);
  EXPECT_EQ(classify(scarf(), 8, 1e-9, Grid(-10, 10, 1001)).beta,
            classify(scarf(), 8, 1e-9, Grid(-10, 10, 4001)).beta);
}

TEST(Classify, GeneratorScales) {
  const auto c = classify(morse());
  ASSERT_TRUE(c.generator_scales.has_value());
  EXPECT_DOUBLE_EQ(c.generator_scales->k0, 0.5);
  EXPECT_DOUBLE_EQ(c.generator_scales->kpm, std::sqrt(0.5));
}

TEST(FiniteForm, MorseFamily) {
  const auto r = finite_form_check(parse("1"), parse("-exp(-x)"), -1.0, 2.5, Grid(-5, 10, 2001));
  EXPECT_NEAR(r.beta_midrange, -1.0, 1e-12);
  EXPECT_LE(r.beta_residual, 1e-10);
  EXPECT_NEAR(r.constant_midrange, 0.0, 1e-12);
  EXPECT_LE(r.constant_residual, 1e-10);
  EXPECT_TRUE(r.holds(1e-10));
}

TEST(FiniteForm, ScarfFamily) {
  const auto r = finite_form_check(parse("tanh(x)"), parse("0"), -1.0, 4.0, Grid(-10, 10, 2001));
  EXPECT_NEAR(r.beta_midrange, -1.0, 1e-12);
  EXPECT_LE(r.beta_residual, 1e-10);
  EXPECT_LE(r.constant_residual, 1e-10);
}

TEST(FiniteForm, LinearFactorFails) {
  const auto r = finite_form_check(parse("x"), parse("0"), 1.0, 1.0, Grid(-5, 5, 2001));
  EXPECT_GT(r.beta_residual, 1.0);
  EXPECT_FALSE(r.holds(1e-10));
}

TEST(FiniteForm, RejectsParameterDependence) {
  EXPECT_THROW(finite_form_check(parse("a*x"), parse("0"), 1.0, 1.0, Grid(-5, 5, 101)),
               ModelError);
}
