#include "shapeinv/symexpr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <ostream>
#include <stdexcept>

#include "shapeinv/errors.hpp"

namespace shapeinv {

namespace {

constexpr std::array<std::pair<Function, std::string_view>, 9> kFunctions{{
    {Function::Exp, "exp"},
    {Function::Ln, "ln"},
    {Function::Sqrt, "sqrt"},
    {Function::Sin, "sin"},
    {Function::Cos, "cos"},
    {Function::Tan, "tan"},
    {Function::Sinh, "sinh"},
    {Function::Cosh, "cosh"},
    {Function::Tanh, "tanh"},
}};

char op_char(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return '+';
    case BinaryOp::Sub: return '-';
    case BinaryOp::Mul: return '*';
    case BinaryOp::Div: return '/';
    case BinaryOp::Pow: return '^';
  }
  return '?';
}

}  // namespace

std::string_view function_name(Function f) {
  for (const auto& [fn, name] : kFunctions)
    if (fn == f) return name;
  return "?";
}

std::optional<Function> function_from_name(std::string_view name) {
  for (const auto& [fn, n] : kFunctions)
    if (n == name) return fn;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Expr

struct Expr::Node {
  Kind kind = Kind::Constant;
  double value = 0.0;
  std::string name;
  Function function = Function::Exp;
  BinaryOp op = BinaryOp::Add;
  std::vector<Expr> children;
};

Expr::Expr() : Expr(constant(0.0)) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::negate(Expr operand) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Negate;
  n->children.push_back(std::move(operand));
  return Expr(std::move(n));
}

Expr Expr::call(Function f, Expr argument) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Call;
  n->function = f;
  n->children.push_back(std::move(argument));
  return Expr(std::move(n));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Binary;
  n->op = op;
  n->children.push_back(std::move(lhs));
  n->children.push_back(std::move(rhs));
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
double Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
Function Expr::function() const { return node_->function; }
BinaryOp Expr::op() const { return node_->op; }
const Expr& Expr::operand() const { return node_->children[0]; }
const Expr& Expr::lhs() const { return node_->children[0]; }
const Expr& Expr::rhs() const { return node_->children[1]; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Expr::Kind::Constant:
      // bitwise-equal doubles, so that 0.0 and -0.0 differ
      return std::signbit(a.value()) == std::signbit(b.value()) &&
             (a.value() == b.value() ||
              (std::isnan(a.value()) && std::isnan(b.value())));
    case Expr::Kind::Variable:
      return a.name() == b.name();
    case Expr::Kind::Negate:
      return a.operand() == b.operand();
    case Expr::Kind::Call:
      return a.function() == b.function() && a.operand() == b.operand();
    case Expr::Kind::Binary:
      return a.op() == b.op() && a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
  return false;
}

Expr operator+(Expr a, Expr b) {
  return Expr::binary(BinaryOp::Add, std::move(a), std::move(b));
}
Expr operator-(Expr a, Expr b) {
  return Expr::binary(BinaryOp::Sub, std::move(a), std::move(b));
}
Expr operator*(Expr a, Expr b) {
  return Expr::binary(BinaryOp::Mul, std::move(a), std::move(b));
}
Expr operator/(Expr a, Expr b) {
  return Expr::binary(BinaryOp::Div, std::move(a), std::move(b));
}
Expr operator-(Expr a) { return Expr::negate(std::move(a)); }

// ---------------------------------------------------------------------------
// Bindings

Bindings::Bindings(
    std::initializer_list<std::pair<std::string, double>> entries) {
  for (const auto& [name, value] : entries) bind(name, value);
}

void Bindings::bind(std::string name, double value) {
  if (lookup(name))
    throw std::invalid_argument("duplicate binding for '" + name + "'");
  entries_.emplace_back(std::move(name), value);
}

Bindings Bindings::with(std::string_view name, double value) const {
  Bindings out = *this;
  for (auto& [n, v] : out.entries_) {
    if (n == name) {
      v = value;
      return out;
    }
  }
  out.entries_.emplace_back(std::string(name), value);
  return out;
}

std::optional<double> Bindings::lookup(std::string_view name) const {
  for (const auto& [n, v] : entries_)
    if (n == name) return v;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void print_number(std::string& out, double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  out.append(buf.data(), end);
}

void print(std::string& out, const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      if (std::signbit(e.value())) {
        out += "(-";
        print_number(out, -e.value());
        out += ')';
      } else {
        print_number(out, e.value());
      }
      return;
    case Expr::Kind::Variable:
      out += e.name();
      return;
    case Expr::Kind::Negate:
      out += "(-";
      print(out, e.operand());
      out += ')';
      return;
    case Expr::Kind::Call:
      out += function_name(e.function());
      out += '(';
      print(out, e.operand());
      out += ')';
      return;
    case Expr::Kind::Binary:
      out += '(';
      print(out, e.lhs());
      out += ' ';
      out += op_char(e.op());
      out += ' ';
      print(out, e.rhs());
      out += ')';
      return;
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(out, e);
  return out;
}

std::ostream& operator<<(std::ostream& os, const Expr& e) {
  return os << to_string(e);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr run() {
    if (text_.empty()) throw ParseError("empty expression", 0);
    for (std::size_t i = 0; i < text_.size(); ++i) {
      if (static_cast<unsigned char>(text_[i]) > 127)
        throw ParseError("non-ASCII character", i);
    }
    skip_ws();
    if (pos_ == text_.size()) throw ParseError("empty expression", pos_);
    Expr e = expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected character", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr expr() {
    Expr lhs = accept('-') ? Expr::negate(term()) : term();
    for (;;) {
      if (accept('+'))
        lhs = Expr::binary(BinaryOp::Add, lhs, term());
      else if (accept('-'))
        lhs = Expr::binary(BinaryOp::Sub, lhs, term());
      else
        return lhs;
    }
  }

  Expr term() {
    Expr lhs = factor();
    for (;;) {
      if (accept('*'))
        lhs = Expr::binary(BinaryOp::Mul, lhs, factor());
      else if (accept('/'))
        lhs = Expr::binary(BinaryOp::Div, lhs, factor());
      else
        return lhs;
    }
  }

  Expr factor() {
    Expr base = unary();
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t at = pos_;
    Expr exponent = factor();
    if (!free_variables(exponent).empty())
      throw ParseError("non-constant exponent", at);
    return Expr::binary(BinaryOp::Pow, base, exponent);
  }

  Expr unary() {
    if (accept('-')) return Expr::negate(unary());
    return primary();
  }

  Expr primary() {
    skip_ws();
    if (pos_ == text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_'))
        ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '(') {
        auto f = function_from_name(name);
        if (!f) throw ParseError("unknown function '" + name + "'", start);
        ++pos_;
        Expr arg = expr();
        if (!accept(')')) throw ParseError("expected ')'", pos_);
        return Expr::call(*f, arg);
      }
      return Expr::variable(std::move(name));
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-'))
        ++look;
      if (look < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        digits();
      }
    }
    double v = 0.0;
    auto [ptr, ec] =
        std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (ec != std::errc() || ptr != text_.data() + pos_)
      throw ParseError("malformed number", start);
    return Expr::constant(v);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).run(); }

// ---------------------------------------------------------------------------
// Free variables, evaluation

namespace {

void collect(const Expr& e, std::set<std::string>& out) {
  switch (e.kind()) {
    case Expr::Kind::Constant: return;
    case Expr::Kind::Variable: out.insert(e.name()); return;
    case Expr::Kind::Negate:
    case Expr::Kind::Call: collect(e.operand(), out); return;
    case Expr::Kind::Binary:
      collect(e.lhs(), out);
      collect(e.rhs(), out);
      return;
  }
}

using Lookup = std::function<std::optional<double>(std::string_view)>;

double apply_function(Function f, double u) {
  switch (f) {
    case Function::Exp: return std::exp(u);
    case Function::Ln: return std::log(u);
    case Function::Sqrt: return std::sqrt(u);
    case Function::Sin: return std::sin(u);
    case Function::Cos: return std::cos(u);
    case Function::Tan: return std::tan(u);
    case Function::Sinh: return std::sinh(u);
    case Function::Cosh: return std::cosh(u);
    case Function::Tanh: return std::tanh(u);
  }
  return std::nan("");
}

double eval_node(const Expr& e, const Lookup& lookup) {
  auto fail = [&](const char* reason) -> double {
    throw DomainError(reason, to_string(e));
  };
  double result = 0.0;
  bool inputs_finite = true;
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return e.value();
    case Expr::Kind::Variable: {
      auto v = lookup(e.name());
      if (!v) throw UnboundVariable(e.name());
      return *v;
    }
    case Expr::Kind::Negate:
      return -eval_node(e.operand(), lookup);
    case Expr::Kind::Call: {
      const double u = eval_node(e.operand(), lookup);
      inputs_finite = std::isfinite(u);
      if (inputs_finite) {
        if (e.function() == Function::Ln && u <= 0.0)
          fail("logarithm of a non-positive value");
        if (e.function() == Function::Sqrt && u < 0.0)
          fail("square root of a negative value");
      }
      result = apply_function(e.function(), u);
      break;
    }
    case Expr::Kind::Binary: {
      const double l = eval_node(e.lhs(), lookup);
      const double r = eval_node(e.rhs(), lookup);
      inputs_finite = std::isfinite(l) && std::isfinite(r);
      switch (e.op()) {
        case BinaryOp::Add: result = l + r; break;
        case BinaryOp::Sub: result = l - r; break;
        case BinaryOp::Mul: result = l * r; break;
        case BinaryOp::Div:
          if (inputs_finite && r == 0.0) fail("division by zero");
          result = l / r;
          break;
        case BinaryOp::Pow:
          if (inputs_finite) {
            if (l == 0.0 && r < 0.0) fail("division by zero");
            if (l < 0.0 && std::trunc(r) != r)
              fail("fractional power of a negative value");
          }
          result = std::pow(l, r);
          break;
      }
      break;
    }
  }
  if (inputs_finite && !std::isfinite(result)) fail("non-finite result");
  return result;
}

}  // namespace

std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  collect(e, out);
  return out;
}

double eval(const Expr& e, const Bindings& bindings) {
  return eval_node(e, [&](std::string_view n) { return bindings.lookup(n); });
}

std::vector<double> eval_on(const Expr& e, const Bindings& params,
                            std::span<const double> xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  double x = 0.0;
  const Lookup lookup = [&](std::string_view n) -> std::optional<double> {
    if (n == "x") return x;
    return params.lookup(n);
  };
  for (double xi : xs) {
    x = xi;
    out.push_back(eval_node(e, lookup));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Folding

namespace {

std::optional<double> try_constant(const Expr& e) {
  if (!free_variables(e).empty()) return std::nullopt;
  try {
    const double v = eval(e, Bindings{});
    if (std::isfinite(v)) return v;
  } catch (const Error&) {
  }
  return std::nullopt;
}

}  // namespace

Expr fold(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
    case Expr::Kind::Variable:
      return e;
    case Expr::Kind::Negate: {
      Expr u = fold(e.operand());
      if (u.is_constant()) return Expr::constant(-u.value());
      if (u.kind() == Expr::Kind::Negate) return u.operand();
      return Expr::negate(u);
    }
    case Expr::Kind::Call: {
      Expr out = Expr::call(e.function(), fold(e.operand()));
      if (auto v = try_constant(out)) return Expr::constant(*v);
      return out;
    }
    case Expr::Kind::Binary:
      break;
  }
  Expr l = fold(e.lhs());
  Expr r = fold(e.rhs());
  Expr out = Expr::binary(e.op(), l, r);
  if (l.is_constant() && r.is_constant()) {
    if (auto v = try_constant(out)) return Expr::constant(*v);
    return out;
  }
  switch (e.op()) {
    case BinaryOp::Add:
      if (l.is_constant(0.0)) return r;
      if (r.is_constant(0.0)) return l;
      break;
    case BinaryOp::Sub:
      if (r.is_constant(0.0)) return l;
      if (l.is_constant(0.0)) return fold(Expr::negate(r));
      break;
    case BinaryOp::Mul:
      if (l.is_constant(1.0)) return r;
      if (r.is_constant(1.0)) return l;
      if (l.is_constant(0.0) || r.is_constant(0.0)) return Expr::constant(0.0);
      if (l.is_constant(-1.0)) return fold(Expr::negate(r));
      if (r.is_constant(-1.0)) return fold(Expr::negate(l));
      break;
    case BinaryOp::Div:
      if (r.is_constant(1.0)) return l;
      if (l.is_constant(0.0)) return Expr::constant(0.0);
      break;
    case BinaryOp::Pow:
      if (r.is_constant(1.0)) return l;
      if (r.is_constant(0.0)) return Expr::constant(1.0);
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Differentiation and substitution

namespace {

Expr derive(const Expr& e, std::string_view var) {
  const Expr one = Expr::constant(1.0);
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return Expr::constant(0.0);
    case Expr::Kind::Variable:
      return Expr::constant(e.name() == var ? 1.0 : 0.0);
    case Expr::Kind::Negate:
      return -derive(e.operand(), var);
    case Expr::Kind::Call: {
      const Expr& u = e.operand();
      const Expr du = derive(u, var);
      switch (e.function()) {
        case Function::Exp: return e * du;
        case Function::Ln: return du / u;
        case Function::Sqrt: return du / (Expr::constant(2.0) * e);
        case Function::Sin: return Expr::call(Function::Cos, u) * du;
        case Function::Cos: return -Expr::call(Function::Sin, u) * du;
        case Function::Tan:
          return (one + Expr::binary(BinaryOp::Pow, e, Expr::constant(2.0))) *
                 du;
        case Function::Sinh: return Expr::call(Function::Cosh, u) * du;
        case Function::Cosh: return Expr::call(Function::Sinh, u) * du;
        case Function::Tanh:
          return (one - Expr::binary(BinaryOp::Pow, e, Expr::constant(2.0))) *
                 du;
      }
      break;
    }
    case Expr::Kind::Binary: {
      const Expr& u = e.lhs();
      const Expr& v = e.rhs();
      switch (e.op()) {
        case BinaryOp::Add: return derive(u, var) + derive(v, var);
        case BinaryOp::Sub: return derive(u, var) - derive(v, var);
        case BinaryOp::Mul:
          return derive(u, var) * v + u * derive(v, var);
        case BinaryOp::Div:
          return (derive(u, var) * v - u * derive(v, var)) /
                 Expr::binary(BinaryOp::Pow, v, Expr::constant(2.0));
        case BinaryOp::Pow: {
          // exponent is variable-free by construction
          const double c = eval(v, Bindings{});
          return Expr::constant(c) *
                 Expr::binary(BinaryOp::Pow, u, Expr::constant(c - 1.0)) *
                 derive(u, var);
        }
      }
      break;
    }
  }
  throw std::logic_error("unreachable expression kind");
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
    return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return !function_from_name(s);
}

}  // namespace

Expr differentiate(const Expr& e, std::string_view var) {
  if (!is_identifier(var))
    throw std::invalid_argument("cannot differentiate with respect to '" +
                                std::string(var) + "'");
  return fold(derive(e, var));
}

Expr substitute(const Expr& e, std::string_view var, const Expr& replacement) {
  if (!is_identifier(var))
    throw std::invalid_argument("unknown variable name '" + std::string(var) +
                                "'");
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return e;
    case Expr::Kind::Variable:
      return e.name() == var ? replacement : e;
    case Expr::Kind::Negate:
      return Expr::negate(substitute(e.operand(), var, replacement));
    case Expr::Kind::Call:
      return Expr::call(e.function(), substitute(e.operand(), var, replacement));
    case Expr::Kind::Binary:
      return Expr::binary(e.op(), substitute(e.lhs(), var, replacement),
                          substitute(e.rhs(), var, replacement));
  }
  return e;
}

}  // namespace shapeinv
