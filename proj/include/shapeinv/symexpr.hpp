#pragma once

// Real-valued expression trees in x and named parameters: parsing, printing,
// evaluation, symbolic differentiation, substitution and constant folding.
//
// Grammar (whitespace insignificant):
//   expr    := ['-'] term (('+' | '-') term)*
//   term    := factor (('*' | '/') factor)*
//   factor  := unary ('^' factor)?
//   unary   := '-' unary | primary
//   primary := number | name | name '(' expr ')' | '(' expr ')'
//
// A leading '-' of an expression negates its whole first term, so "-a*x" is
// -(a*x) and "-x^2" is -(x^2). A '-' that appears where a factor is expected
// (after '*', '/' or '^') binds to that factor alone: "a*-b" is a*(-b).
// Exponents must be free of variables.

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace shapeinv {

enum class Function { Exp, Ln, Sqrt, Sin, Cos, Tan, Sinh, Cosh, Tanh };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

std::string_view function_name(Function f);
std::optional<Function> function_from_name(std::string_view name);

/// Immutable expression tree. Copies share structure.
class Expr {
 public:
  enum class Kind { Constant, Variable, Negate, Call, Binary };

  Expr();  // the constant 0

  static Expr constant(double value);
  static Expr variable(std::string name);
  static Expr negate(Expr operand);
  static Expr call(Function f, Expr argument);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);

  Kind kind() const;
  double value() const;
  const std::string& name() const;
  Function function() const;
  BinaryOp op() const;
  // Negate and Call have a single operand; Binary has lhs and rhs.
  const Expr& operand() const;
  const Expr& lhs() const;
  const Expr& rhs() const;

  bool is_constant() const { return kind() == Kind::Constant; }
  bool is_constant(double v) const { return is_constant() && value() == v; }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);
Expr operator-(Expr a);

/// Name -> value map used for evaluation. Names bind at most once.
class Bindings {
 public:
  Bindings() = default;
  Bindings(std::initializer_list<std::pair<std::string, double>> entries);

  /// Throws std::invalid_argument if `name` is already bound.
  void bind(std::string name, double value);
  /// Copy with `name` bound to `value`, replacing any existing binding.
  Bindings with(std::string_view name, double value) const;

  std::optional<double> lookup(std::string_view name) const;
  const std::vector<std::pair<std::string, double>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, double>> entries_;
};

Expr parse(std::string_view text);

/// Fully parenthesized form; parse(to_string(e)) reproduces e for any e that
/// came out of parse.
std::string to_string(const Expr& e);
std::ostream& operator<<(std::ostream& os, const Expr& e);

std::set<std::string> free_variables(const Expr& e);

/// Throws UnboundVariable or DomainError.
double eval(const Expr& e, const Bindings& bindings);

/// Evaluates `e` at every abscissa with "x" bound to it, on top of `params`.
std::vector<double> eval_on(const Expr& e, const Bindings& params,
                            std::span<const double> xs);

/// Exact derivative with respect to `var`, constant-folded.
Expr differentiate(const Expr& e, std::string_view var);

/// Replaces every occurrence of variable `var` with `replacement`.
Expr substitute(const Expr& e, std::string_view var, const Expr& replacement);

/// Constant folding, identity-element removal and double-negation
/// elimination. No other rewriting.
Expr fold(const Expr& e);

}  // namespace shapeinv
