#include "shapeinv/models.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>

#include <json.hpp>

#include "shapeinv/errors.hpp"
#include "shapeinv/ladder.hpp"

namespace shapeinv {

namespace {

constexpr std::array<std::pair<ModelKind, std::string_view>, 6> kKinds{{
    {ModelKind::Harmonic, "harmonic"},
    {ModelKind::Morse, "morse"},
    {ModelKind::Scarf, "scarf"},
    {ModelKind::Coulomb, "coulomb"},
    {ModelKind::Constant, "constant"},
    {ModelKind::Custom, "custom"},
}};

Expr num(double v) { return Expr::constant(v); }
Expr var(const char* name) { return Expr::variable(name); }

double require(const std::map<std::string, double>& params,
               const std::string& name) {
  auto it = params.find(name);
  if (it == params.end())
    throw ModelError("missing parameter '" + name + "'");
  if (!std::isfinite(it->second))
    throw ModelError("parameter '" + name + "' must be finite");
  return it->second;
}

double require_positive(const std::map<std::string, double>& params,
                        const std::string& name) {
  const double v = require(params, name);
  if (!(v > 0.0)) throw ModelError("parameter '" + name + "' must be positive");
  return v;
}

void reject_unknown(const std::map<std::string, double>& params,
                    std::initializer_list<const char*> known) {
  for (const auto& [name, value] : params) {
    bool found = false;
    for (const char* k : known) found = found || name == k;
    if (!found) throw ModelError("unknown parameter '" + name + "'");
  }
}

bool valid_name(const std::string& s) {
  if (s.empty() || s == "x") return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
    return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return !function_from_name(s);
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  for (const auto& [k, name] : kKinds)
    if (k == kind) return name;
  return "?";
}

std::optional<ModelKind> model_kind_from_name(std::string_view name) {
  for (const auto& [k, n] : kKinds)
    if (n == name) return k;
  return std::nullopt;
}

double UnitSystem::ladder_scale() const { return hbar / std::sqrt(2.0 * mass); }
double UnitSystem::kinetic_scale() const { return hbar * hbar / (2.0 * mass); }

// ---------------------------------------------------------------------------

SuperpotentialModel::SuperpotentialModel(ModelSpec spec) : spec_(std::move(spec)) {
  const auto& u = spec_.units;
  if (!(u.hbar > 0.0 && u.mass > 0.0 && std::isfinite(u.hbar) &&
        std::isfinite(u.mass)))
    throw ModelError("hbar and mass must be positive");

  std::set<std::string> declared{"x"};
  bool any_step = false;
  for (const auto& p : spec_.parameters) {
    if (!valid_name(p.name))
      throw ModelError("invalid parameter name '" + p.name + "'");
    if (!declared.insert(p.name).second)
      throw ModelError("duplicate parameter '" + p.name + "'");
    if (!std::isfinite(p.base) || !std::isfinite(p.step))
      throw ModelError("parameter '" + p.name + "' must be finite");
    any_step = any_step || p.step != 0.0;
  }
  for (const auto& v : free_variables(spec_.superpotential)) {
    if (!declared.count(v))
      throw ModelError("superpotential uses undeclared variable '" + v + "'");
  }
  auto check_parameter_only = [&](const std::optional<Expr>& e,
                                  const char* what) {
    if (!e) return;
    for (const auto& v : free_variables(*e)) {
      if (v == "x" || !declared.count(v))
        throw ModelError(std::string(what) + " uses variable '" + v +
                         "' that is not a parameter");
    }
  };
  check_parameter_only(spec_.closed_form_remainder, "remainder");
  check_parameter_only(spec_.bound_condition, "bound condition");

  if (spec_.kind != ModelKind::Custom && !spec_.closed_form_remainder)
    throw ModelError("catalog models need a closed-form remainder");
  if (spec_.kind == ModelKind::Custom && !spec_.parameters.empty() && !any_step)
    throw ModelError("custom model needs a nonzero translation step");
  if (!spec_.default_grid) spec_.default_grid = Grid(-5.0, 5.0, 2001);
  if (spec_.first_label < 0) throw ModelError("first label must be >= 0");
}

SuperpotentialModel catalog_model(ModelKind kind,
                                  const std::map<std::string, double>& params,
                                  UnitSystem units) {
  if (!(units.hbar > 0.0 && units.mass > 0.0))
    throw ModelError("hbar and mass must be positive");
  const double hbar = units.hbar;
  const double m = units.mass;
  const double ladder = units.ladder_scale();
  const double kinetic = units.kinetic_scale();
  const Expr x = var("x");
  const Expr a = var("a");

  ModelSpec spec;
  spec.kind = kind;
  spec.units = units;

  switch (kind) {
    case ModelKind::Harmonic: {
      reject_unknown(params, {"omega"});
      const double omega = require_positive(params, "omega");
      // (1/2) m omega^2 x^2 = k^2 x^2
      const double k = omega * std::sqrt(m / 2.0);
      spec.superpotential = fold(num(k) * x);
      spec.closed_form_remainder = num(hbar * omega);
      spec.bound_condition = num(1.0);
      spec.inputs = {{"omega", omega}};
      spec.default_grid = Grid(-8.0, 8.0, 2001);
      spec.commutator_grid = Grid(-8.0, 8.0, 16001);
      break;
    }
    case ModelKind::Morse: {
      reject_unknown(params, {"V0", "lambda", "b"});
      const double v0 = require_positive(params, "V0");
      const double lambda = require_positive(params, "lambda");
      const double b = require_positive(params, "b");
      const double c = lambda * hbar / std::sqrt(2.0 * m * v0);
      spec.superpotential =
          fold(num(std::sqrt(v0)) *
               (a - Expr::call(Function::Exp, -(num(lambda) * x))));
      spec.parameters = {{"a", b - 0.5 * c, -c}};
      spec.closed_form_remainder =
          fold(num(2.0 * lambda * hbar * std::sqrt(v0 / (2.0 * m))) *
               (a - num(0.5 * c)));
      spec.bound_condition = a;
      spec.generators = GeneratorScales{m / (hbar * hbar * lambda * lambda),
                                        std::sqrt(m) / (hbar * lambda)};
      spec.inputs = {{"V0", v0}, {"lambda", lambda}, {"b", b}};
      spec.default_grid = Grid(-5.0, 16.0, 4001);
      spec.commutator_grid = Grid(-5.0, 16.0, 8001);
      break;
    }
    case ModelKind::Scarf: {
      reject_unknown(params, {"V0", "lambda"});
      const double v0 = require_positive(params, "V0");
      const double lambda = require_positive(params, "lambda");
      const double q = 8.0 * m * v0 / (hbar * hbar * lambda * lambda) + 1.0;
      if (q < 0.0) throw ModelError("scarf requires 8 m V0 / (hbar lambda)^2 + 1 >= 0");
      spec.superpotential =
          fold(num(ladder * lambda) * a *
               Expr::call(Function::Tanh, num(lambda) * x));
      spec.parameters = {{"a", 0.5 * (std::sqrt(q) - 1.0), -1.0}};
      spec.closed_form_remainder =
          fold(num(kinetic * lambda * lambda) * (num(2.0) * a - num(1.0)));
      spec.bound_condition = a;
      spec.generators = GeneratorScales{m / (hbar * hbar * lambda * lambda),
                                        std::sqrt(2.0 * m) / (hbar * lambda)};
      spec.inputs = {{"V0", v0}, {"lambda", lambda}};
      spec.default_grid = Grid(-10.0, 10.0, 4001);
      spec.commutator_grid = Grid(-10.0, 10.0, 32001);
      break;
    }
    case ModelKind::Coulomb: {
      reject_unknown(params, {"l"});
      const double l = require(params, "l");
      if (l < 0.0) throw ModelError("parameter 'l' must be non-negative");
      spec.superpotential = fold(num(ladder) * (num(1.0) / a - a / x));
      spec.parameters = {{"a", l + 1.0, 1.0}};
      const Expr a1 = a + num(1.0);
      spec.closed_form_remainder = fold(
          num(kinetic) *
          (num(1.0) / Expr::binary(BinaryOp::Pow, a, num(2.0)) -
           num(1.0) / Expr::binary(BinaryOp::Pow, a1, num(2.0))));
      spec.bound_condition = a;
      spec.domain = Domain::HalfLine;
      spec.inputs = {{"l", l}};
      spec.default_grid = Grid::open_left(120.0, 8001);
      // R(a_0) must stay finite at the lowest label: a_0 = l > 0 for l > 0,
      // but l = 0 puts a_0 at the pole.
      spec.first_label = l > 0.0 ? 0 : 1;
      break;
    }
    case ModelKind::Constant: {
      reject_unknown(params, {"c"});
      const double c = require(params, "c");
      spec.superpotential = num(c);
      spec.closed_form_remainder = num(0.0);
      spec.bound_condition = num(0.0);
      spec.inputs = {{"c", c}};
      spec.default_grid = Grid(-8.0, 8.0, 2001);
      break;
    }
    case ModelKind::Custom:
      throw ModelError("custom models are built from a superpotential expression");
  }
  return SuperpotentialModel(std::move(spec));
}

SuperpotentialModel load_custom_model(const std::string& json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("invalid model config: ") + e.what());
  }
  if (!doc.is_object()) throw ModelError("model config must be a JSON object");
  if (!doc.contains("W") || !doc["W"].is_string())
    throw ModelError("model config needs a string field \"W\"");
  for (const auto& [key, value] : doc.items()) {
    if (key != "W" && key != "params" && key != "eta" && key != "units" &&
        key != "grid")
      throw ModelError("unknown model config field \"" + key + "\"");
  }

  ModelSpec spec;
  spec.kind = ModelKind::Custom;
  try {
    spec.superpotential = parse(doc["W"].get<std::string>());
  } catch (const ParseError& e) {
    throw ModelError(std::string("superpotential: ") + e.what());
  }

  auto number_map = [&](const char* key) {
    std::vector<std::pair<std::string, double>> out;
    if (!doc.contains(key)) return out;
    if (!doc[key].is_object())
      throw ModelError(std::string("\"") + key + "\" must be an object");
    for (const auto& [name, value] : doc[key].items()) {
      if (!value.is_number())
        throw ModelError(std::string("\"") + key + "." + name + "\" must be a number");
      out.emplace_back(name, value.get<double>());
    }
    return out;
  };
  const auto params = number_map("params");
  const auto etas = number_map("eta");
  for (const auto& [name, base] : params) {
    double step = 0.0;
    for (const auto& [n, s] : etas)
      if (n == name) step = s;
    spec.parameters.push_back({name, base, step});
  }
  for (const auto& [name, s] : etas) {
    bool found = false;
    for (const auto& p : params) found = found || p.first == name;
    if (!found) throw ModelError("eta given for undeclared parameter '" + name + "'");
  }
  spec.inputs = params;
  if (doc.contains("units")) {
    for (const auto& [name, value] : number_map("units")) {
      if (name == "hbar")
        spec.units.hbar = value;
      else if (name == "mass")
        spec.units.mass = value;
      else
        throw ModelError("unknown unit '" + name + "'");
    }
  }
  if (doc.contains("grid")) {
    if (!doc["grid"].is_string()) throw ModelError("\"grid\" must be a string");
    try {
      spec.default_grid = Grid::parse(doc["grid"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ModelError(e.what());
    }
  }
  return SuperpotentialModel(std::move(spec));
}

// ---------------------------------------------------------------------------

Bindings parameter_at(const SuperpotentialModel& model, int n) {
  if (n < 0) throw std::invalid_argument("level index must be >= 0");
  Bindings b;
  for (const auto& p : model.parameters())
    b.bind(p.name, p.base + static_cast<double>(n - 1) * p.step);
  return b;
}

Expr superpotential_at(const SuperpotentialModel& model, int n) {
  Expr w = model.superpotential();
  const Bindings values = parameter_at(model, n);
  for (const auto& [name, value] : values.entries())
    w = substitute(w, name, Expr::constant(value));
  return fold(w);
}

Expr potential(const SuperpotentialModel& model, Partner which, int n) {
  const Expr w = superpotential_at(model, n);
  const Expr slope = Expr::constant(model.units().ladder_scale()) *
                     differentiate(w, "x");
  return fold(which == Partner::V1 ? w * w - slope : w * w + slope);
}

RemainderProfile remainder_profile(const SuperpotentialModel& model, int n,
                                   const Grid& grid) {
  std::vector<double> xs = grid.points();
  std::vector<double> interior(xs.begin() + 1, xs.end() - 1);
  const auto v2 = eval_on(potential(model, Partner::V2, n), {}, interior);
  const auto v1 = eval_on(potential(model, Partner::V1, n + 1), {}, interior);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double scale = 1.0;
  for (std::size_t i = 0; i < interior.size(); ++i) {
    const double d = v2[i] - v1[i];
    lo = std::min(lo, d);
    hi = std::max(hi, d);
    scale = std::max({scale, std::abs(v2[i]), std::abs(v1[i])});
  }
  return {0.5 * (lo + hi), 0.5 * (hi - lo), scale};
}

double remainder(const SuperpotentialModel& model, int n,
                 const std::optional<Grid>& grid) {
  if (const auto& r = model.closed_form_remainder())
    return eval(*r, parameter_at(model, n));
  const RemainderProfile p =
      remainder_profile(model, n, grid ? *grid : model.default_grid());
  if (p.deviation > 1e-6 * p.scale) throw NotShapeInvariant(p.deviation);
  return p.midrange;
}

double shape_invariance_residual(const SuperpotentialModel& model,
                                 const Grid& grid) {
  double r1 = 0.0;
  if (const auto& r = model.closed_form_remainder())
    r1 = eval(*r, parameter_at(model, 1));
  else
    return remainder_profile(model, 1, grid).deviation;
  const std::vector<double> xs = grid.points();
  const auto v2 = eval_on(potential(model, Partner::V2, 1), {}, xs);
  const auto v1 = eval_on(potential(model, Partner::V1, 2), {}, xs);
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    worst = std::max(worst, std::abs(v2[i] - v1[i] - r1));
  return worst;
}

NormalizabilityReport check_normalizable(const SuperpotentialModel& model,
                                         const Grid& grid, int n) {
  constexpr double kEdgeLimit = 1e-6;
  const GridFunction psi = ground_state_at(model, n, grid);
  double peak = 0.0;
  for (double v : psi.values()) peak = std::max(peak, std::abs(v));
  NormalizabilityReport report;
  report.left_edge = std::abs(psi[0]) / peak;
  report.right_edge = std::abs(psi[psi.size() - 1]) / peak;
  if (model.domain() == Domain::HalfLine) {
    // psi ~ r^p near the origin with p = -r W(r) / (hbar/sqrt(2m))
    const double r0 = grid.x(0);
    const double w0 = eval_on(superpotential_at(model, n), {},
                              std::span<const double>(&r0, 1))[0];
    const double p = -r0 * w0 / model.units().ladder_scale();
    if (p > 0.0) report.left_edge = 0.0;
  }
  report.ok = report.left_edge < kEdgeLimit && report.right_edge < kEdgeLimit;
  return report;
}

void validate_normalizable(const SuperpotentialModel& model, const Grid& grid) {
  const NormalizabilityReport r = check_normalizable(model, grid, 1);
  if (!r.ok) throw NonNormalizable(r.left_edge, r.right_edge);
}

}  // namespace shapeinv
