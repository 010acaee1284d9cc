#include "shapeinv/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "shapeinv/classify.hpp"
#include "shapeinv/commutators.hpp"
#include "shapeinv/errors.hpp"
#include "shapeinv/ladder.hpp"
#include "shapeinv/oracle.hpp"
#include "shapeinv/spectrum.hpp"

namespace shapeinv::cli {

using Json = nlohmann::ordered_json;

namespace {

/// Raised for anything the user got wrong; maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string model;
  std::string config;
  std::string superpotential;
  double a1 = 0.0;
  double eta = 0.0;
  std::vector<std::string> params;
  double hbar = 1.0;
  double mass = 0.5;
  std::string grid;
  int levels = 0;
  double tol = 0.0;
  std::string format;
  std::string output;
  int n = 0;
  int window = 5;
  int samples = 8;
  std::string f;
  std::string g;
};

struct OptionHandles {
  CLI::Option* a1 = nullptr;
  CLI::Option* eta = nullptr;
  CLI::Option* hbar = nullptr;
  CLI::Option* mass = nullptr;
  CLI::Option* levels = nullptr;
  CLI::Option* tol = nullptr;
  CLI::Option* g = nullptr;
};

std::string fmt12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

Json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round12(v);
}

double parse_number(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty())
    throw ConfigError("invalid number for " + what + ": '" + text + "'");
  return v;
}

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("--param expects name=value, got '" + item + "'");
    const std::string name = item.substr(0, eq);
    if (out.count(name)) throw ConfigError("parameter '" + name + "' given twice");
    out[name] = parse_number(item.substr(eq + 1), "parameter '" + name + "'");
  }
  return out;
}

// Parameters a bare --model run falls back to; --param overrides them.
std::map<std::string, double> catalog_defaults(ModelKind kind) {
  switch (kind) {
    case ModelKind::Harmonic: return {{"omega", 2.0}};
    case ModelKind::Morse: return {{"V0", 1.0}, {"lambda", 1.0}, {"b", 3.0}};
    case ModelKind::Scarf: return {{"V0", 20.0}, {"lambda", 1.0}};
    case ModelKind::Coulomb: return {{"l", 0.0}};
    case ModelKind::Constant: return {{"c", 1.0}};
    default: return {};
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

SuperpotentialModel build_model(const Options& o, const OptionHandles& h) {
  const int sources = static_cast<int>(!o.model.empty()) +
                      static_cast<int>(!o.config.empty()) +
                      static_cast<int>(!o.superpotential.empty());
  if (sources != 1)
    throw ConfigError("give exactly one of --model, --config, --superpotential");
  const auto params = parse_params(o.params);
  UnitSystem units{o.hbar, o.mass};

  if (!o.model.empty()) {
    const auto kind = model_kind_from_name(o.model);
    if (!kind || *kind == ModelKind::Custom)
      throw ConfigError("unknown model '" + o.model + "'");
    if ((h.a1->count() || h.eta->count()) && o.f.empty())
      throw ConfigError("--a1/--eta apply to --superpotential and --f only");
    auto merged = params;
    for (const auto& [name, value] : catalog_defaults(*kind)) merged.emplace(name, value);
    return catalog_model(*kind, merged, units);
  }

  Json doc;
  if (!o.config.empty()) {
    if ((h.a1->count() || h.eta->count()) && o.f.empty())
      throw ConfigError("--a1/--eta apply to --superpotential and --f only");
    try {
      doc = Json::parse(read_file(o.config));
    } catch (const Json::parse_error& e) {
      throw ConfigError(std::string("invalid model config: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("model config must be a JSON object");
  } else {
    if (!h.a1->count()) throw ConfigError("--superpotential needs --a1");
    if (!h.eta->count()) throw ConfigError("--superpotential needs --eta");
    doc["W"] = o.superpotential;
    doc["params"]["a"] = o.a1;
    doc["eta"]["a"] = o.eta;
  }
  for (const auto& [name, value] : params) doc["params"][name] = value;
  if (h.hbar->count()) doc["units"]["hbar"] = o.hbar;
  if (h.mass->count()) doc["units"]["mass"] = o.mass;
  return load_custom_model(doc.dump());
}

Grid resolve_grid(const SuperpotentialModel& model, const Options& o,
                  const Grid& fallback) {
  if (o.grid.empty()) return fallback;
  const Grid g = Grid::parse(o.grid);
  if (model.domain() == Domain::HalfLine) {
    if (g.x_min() < 0.0) throw ConfigError("half-line grids must start at r >= 0");
    // the origin itself is singular; "0:R:n" means the open grid (0, R]
    if (g.x_min() == 0.0) return Grid::open_left(g.x_max(), g.size());
  }
  return g;
}

std::string grid_spec(const Grid& g) {
  const double open_min = g.x_max() / static_cast<double>(g.size());
  const double lo = g == Grid::open_left(g.x_max(), g.size()) && g.x_min() == open_min
                        ? 0.0
                        : g.x_min();
  return fmt12(lo) + ":" + fmt12(g.x_max()) + ":" + std::to_string(g.size());
}

Json header(const SuperpotentialModel& model, const Grid& grid) {
  Json j;
  j["model"] = std::string(to_string(model.kind()));
  if (model.kind() == ModelKind::Custom)
    j["superpotential"] = to_string(model.superpotential());
  Json params = Json::object();
  for (const auto& [name, value] : model.inputs()) params[name] = num(value);
  j["params"] = params;
  if (model.kind() == ModelKind::Custom) {
    Json eta = Json::object();
    for (const auto& p : model.parameters()) eta[p.name] = num(p.step);
    j["eta"] = eta;
  }
  j["units"] = {{"hbar", num(model.units().hbar)}, {"mass", num(model.units().mass)}};
  j["grid"] = grid_spec(grid);
  return j;
}

void require_format(const Options& o, std::initializer_list<const char*> allowed,
                    const std::string& fallback, std::string& chosen) {
  chosen = o.format.empty() ? fallback : o.format;
  for (const char* a : allowed)
    if (chosen == a) return;
  throw ConfigError("format '" + chosen + "' is not available for this command");
}

struct Result {
  int code = kOk;
  std::string text;
};

// ---------------------------------------------------------------------------

Result cmd_spectrum(const Options& o, const OptionHandles& h) {
  std::string format;
  require_format(o, {"json", "csv"}, "json", format);
  const auto model = build_model(o, h);
  const Grid grid = resolve_grid(model, o, model.default_grid());
  const int levels = h.levels->count() ? o.levels : 10;
  if (levels < 0) throw ConfigError("--levels must be >= 0");
  const auto report = spectrum(model, levels, SpectrumOptions{grid});

  if (format == "csv") {
    std::string text = "n,energy,remainder\n";
    for (const auto& l : report.levels)
      text += std::to_string(l.n) + "," + fmt12(l.energy) + "," +
              (l.remainder ? fmt12(*l.remainder) : "") + "\n";
    return {kOk, text};
  }
  Json j = header(model, grid);
  Json arr = Json::array();
  for (const auto& l : report.levels) {
    Json e;
    e["n"] = l.n;
    e["energy"] = num(l.energy);
    e["remainder"] = l.remainder ? num(*l.remainder) : Json(nullptr);
    arr.push_back(e);
  }
  j["levels"] = arr;
  j["bound_count"] = report.bound_count;
  j["exhausted"] = report.exhausted;
  j["beta"] = report.beta ? num(*report.beta) : Json(nullptr);
  j["delta"] = report.delta ? num(*report.delta) : Json(nullptr);
  return {kOk, j.dump(2) + "\n"};
}

Result cmd_verify(const Options& o, const OptionHandles& h) {
  std::string format;
  require_format(o, {"json"}, "json", format);
  const auto model = build_model(o, h);
  const Grid grid = resolve_grid(model, o, model.default_grid());
  const double residual = shape_invariance_residual(model, grid);
  double vmax = 0.0;
  for (Partner p : {Partner::V1, Partner::V2})
    for (double v : eval_on(potential(model, p, 1), {}, grid.points()))
      vmax = std::max(vmax, std::abs(v));
  const double tol = h.tol->count() ? o.tol : 1e-8 * vmax;
  const bool ok = residual <= tol;
  Json j = header(model, grid);
  j["residual"] = num(residual);
  j["max_abs_potential"] = num(vmax);
  j["tolerance"] = num(tol);
  j["ok"] = ok;
  return {ok ? kOk : kToleranceFailure, j.dump(2) + "\n"};
}

Result cmd_classify(const Options& o, const OptionHandles& h) {
  std::string format;
  require_format(o, {"json"}, "json", format);
  const auto model = build_model(o, h);
  const Grid grid = resolve_grid(model, o, model.default_grid());
  const double tol = h.tol->count() ? o.tol : 1e-9;
  if (o.samples < 4) throw ConfigError("--samples must be >= 4");
  const auto c = classify(model, o.samples, tol, grid);

  Json j = header(model, grid);
  j["class"] = std::string(to_string(c.algebra));
  j["beta"] = num(c.beta);
  j["delta"] = num(c.delta);
  j["constancy_residual"] = num(c.constancy_residual);
  Json rs = Json::array();
  for (double r : c.remainders) rs.push_back(num(r));
  j["remainders"] = rs;
  if (c.generator_scales)
    j["generator_scales"] = {{"k0", num(c.generator_scales->k0)},
                             {"kpm", num(c.generator_scales->kpm)}};
  else
    j["generator_scales"] = nullptr;
  if (c.structure_constants)
    j["structure_constants"] = {
        {"k0_kplus", num(c.structure_constants->k0_kplus)},
        {"kplus_kminus", num(c.structure_constants->kplus_kminus)}};
  else
    j["structure_constants"] = nullptr;

  int code = kOk;
  if (!o.f.empty()) {
    const Expr f = parse(o.f);
    const Expr g = h.g->count() ? parse(o.g) : Expr::constant(0.0);
    // explicit --eta/--a1, else the model's shifted parameter
    double eta = o.eta;
    double a1 = o.a1;
    if (!h.eta->count() || !h.a1->count()) {
      if (h.eta->count() || h.a1->count())
        throw ConfigError("--f takes both --eta and --a1 or neither");
      eta = 0.0;
      for (const auto& p : model.parameters())
        if (p.step != 0.0) eta = p.step, a1 = p.base;
    }
    if (eta == 0.0) throw ConfigError("--f needs a nonzero shift (--eta)");
    const auto ff = finite_form_check(f, g, eta, a1, grid, model.units());
    const double ftol = h.tol->count() ? o.tol : 1e-10;
    j["finite_form"] = {{"f", to_string(f)},
                        {"g", to_string(g)},
                        {"beta_midrange", num(ff.beta_midrange)},
                        {"beta_residual", num(ff.beta_residual)},
                        {"constant_midrange", num(ff.constant_midrange)},
                        {"constant_residual", num(ff.constant_residual)},
                        {"implied_delta", num(ff.implied_delta)},
                        {"tolerance", num(ftol)},
                        {"holds", ff.holds(ftol)}};
    if (!ff.holds(ftol)) code = kToleranceFailure;
  } else if (h.g->count()) {
    throw ConfigError("--g needs --f");
  }
  return {code, j.dump(2) + "\n"};
}

Result cmd_wavefunction(const Options& o, const OptionHandles& h) {
  std::string format;
  require_format(o, {"csv", "json"}, "csv", format);
  const auto model = build_model(o, h);
  const Grid grid = resolve_grid(model, o, model.default_grid());
  if (o.n < 0) throw ConfigError("--n must be >= 0");
  const GridFunction psi = excited_state(model, o.n, grid);
  if (format == "csv") {
    std::string text = "x,psi\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
      text += fmt12(grid.x(i)) + "," + fmt12(psi[i]) + "\n";
    return {kOk, text};
  }
  Json j = header(model, grid);
  j["n"] = o.n;
  Json xs = Json::array();
  Json ys = Json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    xs.push_back(num(grid.x(i)));
    ys.push_back(num(psi[i]));
  }
  j["x"] = xs;
  j["psi"] = ys;
  return {kOk, j.dump(2) + "\n"};
}

Result cmd_oracle(const Options& o, const OptionHandles& h) {
  std::string format;
  require_format(o, {"json"}, "json", format);
  const auto model = build_model(o, h);
  const Grid grid = resolve_grid(model, o, model.default_grid());
  int levels = o.levels;
  if (!h.levels->count())
    levels = std::min(4, spectrum(model, 4, SpectrumOptions{grid}).bound_count);
  if (levels < 1) throw ConfigError("--levels must be >= 1");
  const auto report = compare(model, grid, levels);
  const double tol = h.tol->count() ? o.tol : 1e-2;
  constexpr double kOverlapFloor = 0.999;
  const bool ok = report.max_abs_difference <= tol && report.min_overlap >= kOverlapFloor;

  Json j = header(model, grid);
  j["numeric_ground"] = num(report.numeric_ground);
  Json arr = Json::array();
  for (const auto& l : report.levels) {
    Json e;
    e["n"] = l.n;
    e["algebraic"] = num(l.algebraic);
    e["numeric_gap"] = num(l.numeric_gap);
    e["difference"] = num(l.difference);
    e["overlap"] = num(l.overlap);
    arr.push_back(e);
  }
  j["levels"] = arr;
  j["max_abs_difference"] = num(report.max_abs_difference);
  j["min_overlap"] = num(report.min_overlap);
  j["tolerance"] = {{"energy", num(tol)}, {"overlap", num(kOverlapFloor)}};
  j["ok"] = ok;
  return {ok ? kOk : kToleranceFailure, j.dump(2) + "\n"};
}

Result cmd_commutators(const Options& o, const OptionHandles& h) {
  std::string format;
  require_format(o, {"json"}, "json", format);
  const auto model = build_model(o, h);
  const Grid grid = resolve_grid(model, o, model.commutator_grid());
  const LabelWindow window = default_window(model, o.window);
  const auto probes = default_probes(grid);
  const auto report = commutator_suite(model, grid, window, probes);
  const double tol = h.tol->count() ? o.tol : 1e-3;
  bool ok = report.max_residual() <= tol;

  Json j = header(model, grid);
  j["window"] = {{"lo", window.lo}, {"hi", window.hi}};
  j["probes"] = report.probe_count;
  Json rs = Json::object();
  for (const auto& [name, value] : report.residuals) rs[name] = num(value);
  j["residuals"] = rs;
  j["chain_closure"] = num(report.chain_closure);
  Json coef = Json::array();
  for (double c : report.raise_remainder_coefficients) coef.push_back(num(c));
  j["raise_remainder_coefficients"] = coef;
  if (model.generators()) {
    const auto b = generator_brackets(model, grid, window, probes);
    j["generators"] = {{"k0_kplus", num(b.k0_kplus)},
                       {"k0_kplus_residual", num(b.k0_kplus_residual)},
                       {"kplus_kminus", num(b.kplus_kminus)},
                       {"kplus_kminus_residual", num(b.kplus_kminus_residual)}};
    ok = ok && b.k0_kplus_residual <= tol && b.kplus_kminus_residual <= tol &&
         b.kplus_kminus > 0.0;
  }
  j["tolerance"] = num(tol);
  j["ok"] = ok;
  return {ok ? kOk : kToleranceFailure, j.dump(2) + "\n"};
}

}  // namespace

double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shape-invariant potentials: spectra, ladder states, algebra checks",
               "shapeinv"};
  app.require_subcommand(1);
  Options o;
  OptionHandles h;

  using Command = Result (*)(const Options&, const OptionHandles&);
  std::vector<std::pair<CLI::App*, Command>> commands;
  auto add = [&](const char* name, const char* help, Command fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    h.levels = nullptr;
    h.g = nullptr;
    sub->add_option("--model", o.model, "catalog model: harmonic, morse, scarf, coulomb, constant");
    sub->add_option("--config", o.config, "custom model JSON file");
    sub->add_option("--superpotential", o.superpotential, "custom W(x; a)");
    h.a1 = sub->add_option("--a1", o.a1, "a_1 for --superpotential");
    h.eta = sub->add_option("--eta", o.eta, "parameter shift for --superpotential");
    sub->add_option("--param", o.params, "name=value")->allow_extra_args(false);
    h.hbar = sub->add_option("--hbar", o.hbar, "reduced Planck constant");
    h.mass = sub->add_option("--mass", o.mass, "particle mass");
    sub->add_option("--grid", o.grid, "min:max:n");
    h.tol = sub->add_option("--tol", o.tol, "tolerance");
    sub->add_option("--format", o.format, "json or csv");
    sub->add_option("--output", o.output, "write the report to a file");
    commands.emplace_back(sub, fn);
    return sub;
  };
  // each subcommand owns its option objects; remember them per subcommand
  std::map<CLI::App*, OptionHandles> handles;

  auto* s = add("spectrum", "bound-state energies from remainder sums", cmd_spectrum);
  h.levels = s->add_option("--levels", o.levels, "number of levels");
  handles[s] = h;
  auto* v = add("verify", "shape-invariance residual", cmd_verify);
  handles[v] = h;
  auto* c = add("classify", "spectrum-generating algebra", cmd_classify);
  c->add_option("--samples", o.samples, "remainder differences to inspect");
  c->add_option("--f", o.f, "f(x) in W = f a + g");
  h.g = c->add_option("--g", o.g, "g(x) in W = f a + g");
  handles[c] = h;
  auto* w = add("wavefunction", "ladder-built eigenfunction", cmd_wavefunction);
  w->add_option("--n", o.n, "level index");
  handles[w] = h;
  auto* r = add("oracle", "compare with the finite-difference solver", cmd_oracle);
  h.levels = r->add_option("--levels", o.levels, "number of levels");
  handles[r] = h;
  auto* m = add("commutators", "operator identities on probe states", cmd_commutators);
  m->add_option("--window", o.window, "number of labels");
  handles[m] = h;

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  for (auto& [sub, fn] : commands) {
    if (!sub->parsed()) continue;
    Result result;
    try {
      result = fn(o, handles[sub]);
    } catch (const ConfigError& e) {
      err << "error: " << e.what() << "\n";
      return kConfigError;
    } catch (const ConvergenceError& e) {
      err << "error: " << e.what() << "\n";
      return kToleranceFailure;
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kConfigError;
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << "\n";
      return kConfigError;
    } catch (const nlohmann::json::exception& e) {
      err << "error: " << e.what() << "\n";
      return kConfigError;
    }
    if (o.output.empty()) {
      out << result.text;
    } else {
      std::ofstream file(o.output, std::ios::binary);
      if (!(file << result.text)) {
        err << "error: cannot write '" << o.output << "'\n";
        return kConfigError;
      }
    }
    return result.code;
  }
  return kConfigError;
}

}  // namespace shapeinv::cli
