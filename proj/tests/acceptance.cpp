// One PASS/FAIL line per acceptance criterion, followed by indented details.
// Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "random_expr.hpp"
#include "shapeinv/classify.hpp"
#include "shapeinv/commutators.hpp"
#include "shapeinv/ladder.hpp"
#include "shapeinv/oracle.hpp"
#include "shapeinv/spectrum.hpp"

using namespace shapeinv;

namespace {

SuperpotentialModel harmonic() { return catalog_model(ModelKind::Harmonic, {{"omega", 2}}); }
SuperpotentialModel morse() {
  return catalog_model(ModelKind::Morse, {{"V0", 1}, {"lambda", 1}, {"b", 3}});
}
SuperpotentialModel scarf() {
  return catalog_model(ModelKind::Scarf, {{"V0", 20}, {"lambda", 1}});
}
SuperpotentialModel coulomb() { return catalog_model(ModelKind::Coulomb, {{"l", 0}}); }
SuperpotentialModel constant() { return catalog_model(ModelKind::Constant, {{"c", 1}}); }

// Collects the details of one criterion; a single failed check fails it.
class Criterion {
 public:
  void check(bool ok, const std::string& what) {
    ok_ = ok_ && ok;
    lines_.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { lines_.push_back("note " + what); }
  bool ok() const { return ok_; }
  const std::vector<std::string>& lines() const { return lines_; }

 private:
  bool ok_ = true;
  std::vector<std::string> lines_;
};

std::string fmt(const char* pattern, double a) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}
std::string fmt(const char* pattern, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string describe(const Grid& g) {
  std::ostringstream out;
  out << '[' << g.x_min() << ", " << g.x_max() << "] x " << g.size();
  return out.str();
}

std::string name(const SuperpotentialModel& m) { return std::string(to_string(m.kind())); }

std::vector<double> energies(const SpectrumReport& s) {
  std::vector<double> out;
  for (const auto& level : s.levels) out.push_back(level.energy);
  return out;
}

std::string list(const std::vector<double>& v) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
  out << '}';
  return out.str();
}

// Gaps of the grid spectrum of H1(a_1) against the algebraic levels, with a
// tolerance per level.
void check_gaps(Criterion& c, const SuperpotentialModel& m, const Grid& g,
                const std::vector<double>& tolerances) {
  const SpectrumReport s = spectrum(m, static_cast<int>(tolerances.size()));
  const auto e = eigs_lowest(build_hamiltonian(m, g, Partner::V1), tolerances.size()).values;
  for (std::size_t n = 1; n < tolerances.size(); ++n) {
    const double diff = std::abs(e[n] - e[0] - s.levels[n].energy);
    c.check(diff <= tolerances[n],
            name(m) + " n=" + std::to_string(n) +
                fmt(" gap |dE| = %.3g (tol %.0e)", diff, tolerances[n]));
  }
}

// ---------------------------------------------------------------------------

Criterion shape_invariance() {
  Criterion c;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& m : {harmonic(), morse(), scarf(), coulomb()}) {
    const Grid d = m.default_grid();
    const Grid g = m.domain() == Domain::HalfLine ? Grid::open_left(d.x_max(), 2001)
                                                  : Grid(d.x_min(), d.x_max(), 2001);
    const double r = shape_invariance_residual(m, g);
    c.check(r <= 1e-9, name(m) + fmt(" residual %.3g on ", r) + describe(g));
  }
  const double t = seconds_since(t0);
  c.check(t < 1.0, fmt("runtime %.3f s", t));
  return c;
}

Criterion morse_spectrum() {
  Criterion c;
  const auto t0 = std::chrono::steady_clock::now();
  const auto m = morse();
  const SpectrumReport s = spectrum(m, 10);
  c.check(energies(s) == std::vector<double>{0, 4, 6} && s.bound_count == 3,
          "algebraic levels " + list(energies(s)));

  const Grid box(-2, 16, 4001);
  check_gaps(c, m, box, {0, 5e-3, 5e-3});
  // V0 (exp(-2 lambda x) - 2 b exp(-lambda x)) = V1 - E0 with E0 = 6.25
  const Expr bare = parse("exp(-2*x) - 6*exp(-x)");
  const auto e = eigs_lowest(build_hamiltonian(bare, box, m.units()), 3).values;
  const double expected[] = {-6.25, -2.25, -0.25};
  for (std::size_t n = 0; n < 3; ++n)
    c.check(std::abs(e[n] - expected[n]) <= 5e-3,
            "bare n=" + std::to_string(n) + fmt(" eigenvalue %.6f vs %.2f", e[n], expected[n]));

  const Grid wide = m.default_grid();
  const auto w = eigs_lowest(build_hamiltonian(bare, wide, m.units()), 3).values;
  c.note("same operator on " + describe(wide) + ": " + list(w));
  const GridFunction psi0 = ground_state_at(m, 1, box);
  const double peak = *std::max_element(psi0.values().begin(), psi0.values().end());
  c.note(fmt("ground state at x = -2 is %.2g of its peak, so the wall there shifts the levels",
             psi0[0] / peak));
  const double t = seconds_since(t0);
  c.check(t < 10.0, fmt("runtime %.3f s", t));
  return c;
}

Criterion scarf_spectrum() {
  Criterion c;
  const auto t0 = std::chrono::steady_clock::now();
  const auto m = scarf();
  const SpectrumReport s = spectrum(m, 10);
  c.check(energies(s) == std::vector<double>{0, 7, 12, 15} && s.bound_count == 4,
          "algebraic levels " + list(energies(s)));
  check_gaps(c, m, Grid(-10, 10, 4001), {0, 1e-2, 1e-2, 5e-2});
  const double t = seconds_since(t0);
  c.check(t < 10.0, fmt("runtime %.3f s", t));
  return c;
}

Criterion harmonic_spectrum() {
  Criterion c;
  const auto m = harmonic();
  const SpectrumReport s = spectrum(m, 9);
  bool exact = s.levels.size() == 9;
  for (const auto& level : s.levels) exact = exact && level.energy == 2.0 * level.n;
  c.check(exact, "algebraic levels " + list(energies(s)));
  check_gaps(c, m, Grid(-8, 8, 2001), std::vector<double>(9, 5e-3));
  return c;
}

Criterion ladder_states() {
  Criterion c;
  struct Case {
    SuperpotentialModel model;
    Grid grid;
  };
  const std::vector<Case> cases{{morse(), Grid(-2, 16, 4001)},
                                {scarf(), Grid(-10, 10, 4001)},
                                {harmonic(), Grid(-8, 8, 2001)}};
  auto run = [&](const SuperpotentialModel& m, const Grid& g, bool counts) {
    const std::string label = name(m) + " on " + describe(g);
    auto record = [&](bool ok, const std::string& what) {
      if (counts) c.check(ok, what);
      else c.note(std::string(ok ? "ok " : "FAIL ") + what);
    };
    try {
      const int levels = std::min(spectrum(m, 9).bound_count, 9);
      const ComparisonReport r = compare(m, g, levels);
      double worst_norm = 0.0;
      bool nodes = true;
      for (int n = 0; n < levels; ++n) {
        const GridFunction psi = excited_state(m, n, g);
        worst_norm = std::max(worst_norm, std::abs(l2_norm(psi) - 1.0));
        nodes = nodes && count_nodes(psi) == n;
      }
      record(worst_norm <= 1e-3, label + fmt(" max |norm - 1| = %.3g", worst_norm));
      record(r.min_overlap >= 0.999, label + fmt(" min overlap %.6f", r.min_overlap));
      record(nodes, label + " node counts equal level indices");
    } catch (const std::exception& e) {
      record(false, label + ": " + e.what());
    }
  };
  for (const auto& [m, g] : cases) run(m, g, true);
  run(morse(), morse().default_grid(), false);
  return c;
}

Criterion commutators() {
  Criterion c;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& m : {morse(), scarf(), harmonic(), coulomb()}) {
    const Grid g = m.commutator_grid();
    const auto r = commutator_suite(m, g, default_window(m, 5), default_probes(g, 5));
    double worst = 0.0;
    std::string worst_name;
    for (const auto& [id, v] : r.residuals)
      if (id != "bracket_chain_step" && v >= worst) {
        worst = v;
        worst_name = id;
      }
    c.check(worst <= 1e-3, name(m) + fmt(" max identity residual %.3g", worst) + " (" + worst_name + ")");
    if (m.kind() == ModelKind::Coulomb)
      c.check(r.chain_closure >= 1e-2, name(m) + fmt(" bracket chain open, %.3g", r.chain_closure));
    else
      c.check(r.chain_closure <= 1e-3, name(m) + fmt(" bracket chain closes, %.3g", r.chain_closure));
  }
  const double t = seconds_since(t0);
  c.check(t < 5.0, fmt("runtime %.3f s", t));
  return c;
}

Criterion classification() {
  Criterion c;
  struct Case {
    SuperpotentialModel model;
    AlgebraClass expected;
    double beta, delta;
  };
  const std::vector<Case> cases{{harmonic(), AlgebraClass::HeisenbergWeyl, 0, 2},
                                {morse(), AlgebraClass::SU11, -1, 5},
                                {scarf(), AlgebraClass::SU11, -1, 8},
                                {coulomb(), AlgebraClass::InfiniteDimensional, NAN, NAN},
                                {constant(), AlgebraClass::Degenerate, NAN, NAN}};
  int finite = 0;
  for (const auto& [m, expected, beta, delta] : cases) {
    const auto r = classify(m);
    bool ok = r.algebra == expected;
    if (!std::isnan(beta)) ok = ok && std::abs(r.beta - beta) <= 1e-12 && std::abs(r.delta - delta) <= 1e-12;
    if (r.algebra != AlgebraClass::InfiniteDimensional) ++finite;
    c.check(ok, name(m) + " -> " + std::string(to_string(r.algebra)) +
                    fmt(" (beta %g, delta %g)", r.beta, r.delta));
  }
  c.check(finite == 4, "finite classes: constant, harmonic, morse, scarf");
  return c;
}

Criterion finite_form() {
  Criterion c;
  const Grid g(-5, 5, 2001);
  const auto morse_form = finite_form_check(parse("1"), parse("-exp(-x)"), -1, 2.5, g);
  const auto scarf_form = finite_form_check(parse("tanh(x)"), parse("0"), -1, 4, g);
  const auto linear = finite_form_check(parse("x"), parse("0"), 1, 1, g);
  auto worst = [](const FiniteFormCheck& f) { return std::max(f.beta_residual, f.constant_residual); };
  c.check(worst(morse_form) <= 1e-10, fmt("(1, -exp(-x)) residual %.3g", worst(morse_form)));
  c.check(worst(scarf_form) <= 1e-10, fmt("(tanh x, 0) residual %.3g", worst(scarf_form)));
  c.check(linear.beta_residual > 0.1, fmt("(x, 0) residual %.3g", linear.beta_residual));
  return c;
}

Criterion properties() {
  Criterion c;
  const auto d = testing_support::check_derivatives(20240601, 100);
  c.check(d.accepted == 100 && d.worst <= 1.0,
          "symbolic derivative vs finite difference, " + std::to_string(d.accepted) +
              fmt(" samples, worst %.3g of the 1e-6 bound", d.worst));

  for (const auto& m : {harmonic(), morse(), scarf(), coulomb()}) {
    const Grid g = m.default_grid();
    const int k = std::min(spectrum(m, 4).bound_count, 4);
    const auto e1 = eigs_lowest(build_hamiltonian(m, g, Partner::V1), static_cast<std::size_t>(k)).values;
    const auto e2 = eigs_lowest(build_hamiltonian(m, g, Partner::V2), static_cast<std::size_t>(k - 1)).values;
    double worst = 0.0;
    for (std::size_t n = 0; n + 1 < e1.size(); ++n)
      worst = std::max(worst, std::abs((e2[n] - e2[0]) - (e1[n + 1] - e1[1])));
    c.check(worst <= 5e-3, name(m) + fmt(" partner degeneracy %.3g", worst));
  }

  for (const auto& m : {harmonic(), morse(), scarf(), coulomb()}) {
    const Grid coarse = m.default_grid();
    const Grid fine = m.domain() == Domain::HalfLine
                          ? Grid::open_left(coarse.x_max(), 2 * coarse.size())
                          : Grid(coarse.x_min(), coarse.x_max(), 2 * coarse.size() - 1);
    const double exact = spectrum(m, 2).levels[1].energy;
    auto error = [&](const Grid& g) {
      const auto e = eigs_lowest(build_hamiltonian(m, g, Partner::V1), 2).values;
      return std::abs(e[1] - e[0] - exact);
    };
    const double ratio = error(coarse) / error(fine);
    c.check(ratio >= 3.0, name(m) + fmt(" refinement ratio %.3g", ratio));
  }

  for (const auto& m : {harmonic(), morse(), scarf(), coulomb()}) {
    const auto s = spectrum(m, 10);
    const auto growth = growth_check(s);
    c.check(growth.ok, name(m) + fmt(" growth bound, C = %.4g", growth.bound_constant));
  }
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Criterion()>>> criteria{
      {"shape-invariance identity", shape_invariance},
      {"morse spectrum and oracle", morse_spectrum},
      {"scarf spectrum and oracle", scarf_spectrum},
      {"harmonic spectrum and oracle", harmonic_spectrum},
      {"ladder wavefunctions", ladder_states},
      {"commutator suite", commutators},
      {"classification", classification},
      {"finite-form conditions", finite_form},
      {"property suites", properties},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Criterion c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.check(false, std::string("exception: ") + e.what());
    }
    if (!c.ok()) ++failed;
    std::printf("criterion %zu: %s  %s\n", i + 1, c.ok() ? "PASS" : "FAIL", criteria[i].first.c_str());
    for (const auto& line : c.lines()) std::printf("    %s\n", line.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
