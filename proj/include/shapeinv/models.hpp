#pragma once

// Superpotential models W(x; a): the built-in catalog (harmonic, Morse,
// Scarf, Coulomb-type, constant) and user-defined models, together with the
// partner potentials, parameter sequences and remainders they induce.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shapeinv/grid.hpp"
#include "shapeinv/symexpr.hpp"

namespace shapeinv {

enum class ModelKind { Harmonic, Morse, Scarf, Coulomb, Constant, Custom };

std::string_view to_string(ModelKind kind);
std::optional<ModelKind> model_kind_from_name(std::string_view name);

struct UnitSystem {
  double hbar = 1.0;
  double mass = 0.5;

  /// hbar / sqrt(2m), the coefficient of d/dx in the ladder factors.
  double ladder_scale() const;
  /// hbar^2 / (2m), the kinetic coefficient.
  double kinetic_scale() const;
};

/// A parameter that moves along the translation a_n = a_1 + (n-1)*step.
/// A zero step marks a fixed constant.
struct ShiftedParameter {
  std::string name;
  double base = 0.0;
  double step = 0.0;
};

enum class Domain { Line, HalfLine };
enum class Partner { V1, V2 };

/// Normalizations of the dimensionless generators K0 = k0 * R(a_0) and
/// K+- = kpm * B+-.
struct GeneratorScales {
  double k0 = 1.0;
  double kpm = 1.0;
};

struct ModelSpec {
  ModelKind kind = ModelKind::Custom;
  Expr superpotential;
  std::vector<ShiftedParameter> parameters;
  UnitSystem units;
  std::optional<Expr> closed_form_remainder;
  // Positive exactly where the ground state exp(-int W) at the given
  // parameter values is normalizable.
  std::optional<Expr> bound_condition;
  Domain domain = Domain::Line;
  std::optional<GeneratorScales> generators;
  // User-facing inputs (e.g. V0, lambda, b), echoed in reports.
  std::vector<std::pair<std::string, double>> inputs;
  std::optional<Grid> default_grid;
  // Finer grid for operator identities, whose stacked derivatives amplify
  // the stencil error; the default grid when absent.
  std::optional<Grid> commutator_grid;
  // Lowest bundle label at which every remainder used by the commutator
  // identities is finite.
  int first_label = 0;
};

/// Validated, immutable superpotential model.
class SuperpotentialModel {
 public:
  /// Throws ModelError if the spec violates a model invariant.
  explicit SuperpotentialModel(ModelSpec spec);

  ModelKind kind() const { return spec_.kind; }
  const Expr& superpotential() const { return spec_.superpotential; }
  const std::vector<ShiftedParameter>& parameters() const {
    return spec_.parameters;
  }
  const UnitSystem& units() const { return spec_.units; }
  const std::optional<Expr>& closed_form_remainder() const {
    return spec_.closed_form_remainder;
  }
  const std::optional<Expr>& bound_condition() const {
    return spec_.bound_condition;
  }
  Domain domain() const { return spec_.domain; }
  const std::optional<GeneratorScales>& generators() const {
    return spec_.generators;
  }
  const std::vector<std::pair<std::string, double>>& inputs() const {
    return spec_.inputs;
  }
  const Grid& default_grid() const { return *spec_.default_grid; }
  const Grid& commutator_grid() const {
    return spec_.commutator_grid ? *spec_.commutator_grid : *spec_.default_grid;
  }
  int first_label() const { return spec_.first_label; }

 private:
  ModelSpec spec_;
};

/// Required parameters: harmonic{omega}, morse{V0, lambda, b},
/// scarf{V0, lambda}, coulomb{l}, constant{c}. Throws ModelError.
SuperpotentialModel catalog_model(ModelKind kind,
                                  const std::map<std::string, double>& params,
                                  UnitSystem units = {});

/// Builds a model from a JSON object
///   {"W": "...", "params": {name: value}, "eta": {name: value},
///    "units": {"hbar": h, "mass": m}, "grid": "min:max:n"}
/// where "eta", "units" and "grid" are optional.
SuperpotentialModel load_custom_model(const std::string& json_text);

/// a_n = a_1 + (n-1)*eta for every parameter, computed directly from n.
Bindings parameter_at(const SuperpotentialModel& model, int n);

/// W(x; a_n) with the parameters replaced by their values.
Expr superpotential_at(const SuperpotentialModel& model, int n);

/// V1 = W^2 - (hbar/sqrt(2m)) W', V2 = W^2 + (hbar/sqrt(2m)) W' at a_n.
Expr potential(const SuperpotentialModel& model, Partner which, int n);

/// x-profile of V2(x; a_n) - V1(x; a_{n+1}) over the grid interior.
struct RemainderProfile {
  double midrange = 0.0;
  double deviation = 0.0;  // half of max - min
  double scale = 1.0;      // max(1, max |V|) over the interior
};
RemainderProfile remainder_profile(const SuperpotentialModel& model, int n,
                                   const Grid& grid);

/// R(a_n). Catalog models use the closed form; custom models need a grid and
/// throw NotShapeInvariant when the difference is x-dependent.
double remainder(const SuperpotentialModel& model, int n,
                 const std::optional<Grid>& grid = std::nullopt);

/// sup over the grid of |V2(x; a_1) - V1(x; a_2) - R(a_1)|. Custom models use
/// the midrange remainder.
double shape_invariance_residual(const SuperpotentialModel& model,
                                 const Grid& grid);

struct NormalizabilityReport {
  bool ok = false;
  // |psi_0| at each edge relative to its maximum.
  double left_edge = 0.0;
  double right_edge = 0.0;
};

/// Checks that the ground state at a_n decays to below 1e-6 of its peak at
/// both edges. On a half-line domain the left edge is the origin, where the
/// state vanishes iff it behaves like r^p with p > 0.
NormalizabilityReport check_normalizable(const SuperpotentialModel& model,
                                         const Grid& grid, int n = 1);

/// Throws NonNormalizable when check_normalizable fails at a_1.
void validate_normalizable(const SuperpotentialModel& model, const Grid& grid);

}  // namespace shapeinv
