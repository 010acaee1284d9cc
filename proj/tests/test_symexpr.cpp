#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "random_expr.hpp"
#include "shapeinv/errors.hpp"
#include "shapeinv/symexpr.hpp"

using namespace shapeinv;
using testing_support::RandomExpr;

namespace {

Expr var(const char* n) { return Expr::variable(n); }
Expr num(double v) { return Expr::constant(v); }

}  // namespace

TEST(Parse, SingleVariable) {
  const Expr e = parse("x");
  ASSERT_EQ(e.kind(), Expr::Kind::Variable);
  EXPECT_EQ(e.name(), "x");
}

TEST(Parse, MorseShape) {
  const Expr expected =
      Expr::binary(BinaryOp::Sub, var("a"),
                   Expr::call(Function::Exp,
                              Expr::negate(Expr::binary(BinaryOp::Mul, var("lambda"),
                                                        var("x")))));
  EXPECT_EQ(parse("a - exp(-lambda*x)"), expected);
}

TEST(Parse, ScarfShape) {
  const Expr expected = Expr::binary(
      BinaryOp::Mul, var("a"),
      Expr::call(Function::Tanh, Expr::binary(BinaryOp::Mul, var("lambda"), var("x"))));
  EXPECT_EQ(parse("a*tanh(lambda*x)"), expected);
}

TEST(Parse, PowerIsRightAssociative) {
  EXPECT_EQ(parse("x^2^3"),
            Expr::binary(BinaryOp::Pow, var("x"),
                         Expr::binary(BinaryOp::Pow, num(2), num(3))));
}

TEST(Parse, PrecedenceAndGrouping) {
  EXPECT_EQ(parse("1 + 2*x"), num(1) + num(2) * var("x"));
  EXPECT_EQ(parse("(1 + 2)*x"), (num(1) + num(2)) * var("x"));
  EXPECT_EQ(parse("x - 1 - 2"), (var("x") - num(1)) - num(2));
  EXPECT_EQ(parse("x / 2 / 4"), (var("x") / num(2)) / num(4));
}

TEST(Parse, NumberForms) {
  EXPECT_EQ(parse("2.5e-3"), num(2.5e-3));
  EXPECT_EQ(parse(".5"), num(0.5));
  EXPECT_EQ(parse("3."), num(3.0));
}

TEST(Parse, SyntaxErrorsCarryOffset) {
  try {
    parse("x + * 2");
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("(x"), ParseError);
  EXPECT_THROW(parse("x)"), ParseError);
  EXPECT_THROW(parse("2 x"), ParseError);
  EXPECT_THROW(parse("x @ 1"), ParseError);
}

TEST(Parse, UnknownFunction) {
  EXPECT_THROW(parse("sech(x)"), ParseError);
}

TEST(Parse, NonConstantExponentRejected) {
  EXPECT_THROW(parse("x^x"), ParseError);
  EXPECT_THROW(parse("2^a"), ParseError);
  EXPECT_NO_THROW(parse("x^(1/2)"));
  EXPECT_NO_THROW(parse("x^-1"));
}

TEST(Print, FullyParenthesized) {
  EXPECT_EQ(to_string(parse("a - exp(-lambda*x)")), "(a - exp((-(lambda * x))))");
  EXPECT_EQ(to_string(parse("x^2")), "(x ^ 2)");
  EXPECT_EQ(to_string(num(-1.5)), "(-1.5)");
  EXPECT_EQ(to_string(num(0.1)), "0.1");
}

TEST(Eval, Examples) {
  EXPECT_EQ(eval(parse("x^2"), {{"x", 3.0}}), 9.0);
  EXPECT_EQ(eval(parse("tanh(x)"), {{"x", 0.0}}), 0.0);
  EXPECT_EQ(eval(parse("a - exp(-x)"), {{"a", 2.5}, {"x", 0.0}}), 1.5);
}

TEST(Eval, UnboundVariable) {
  try {
    eval(parse("a + x"), {{"x", 1.0}});
    FAIL();
  } catch (const UnboundVariable& e) {
    EXPECT_EQ(e.name(), "a");
  }
}

TEST(Eval, DomainErrorsNameTheSubtree) {
  try {
    eval(parse("1 + ln(x - 1)"), {{"x", 0.5}});
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_EQ(e.subtree(), "ln((x - 1))");
  }
  EXPECT_THROW(eval(parse("1/x"), {{"x", 0.0}}), DomainError);
  EXPECT_THROW(eval(parse("sqrt(x)"), {{"x", -1.0}}), DomainError);
  EXPECT_THROW(eval(parse("x^0.5"), {{"x", -1.0}}), DomainError);
  EXPECT_THROW(eval(parse("exp(x)"), {{"x", 1000.0}}), DomainError);
}

TEST(Eval, Deterministic) {
  const Expr e = parse("sin(x)*exp(-x^2) + tanh(a*x)/cosh(x)");
  const Bindings b{{"x", 0.37}, {"a", 1.3}};
  EXPECT_EQ(eval(e, b), eval(e, b));
}

TEST(Eval, OnGrid) {
  const std::vector<double> xs{0.0, 1.0, 2.0};
  const auto ys = eval_on(parse("a*x + 1"), {{"a", 2.0}}, xs);
  EXPECT_EQ(ys, (std::vector<double>{1.0, 3.0, 5.0}));
}

TEST(BindingsTest, DuplicatesRejected) {
  Bindings b;
  b.bind("a", 1.0);
  EXPECT_THROW(b.bind("a", 2.0), std::invalid_argument);
  EXPECT_THROW((Bindings{{"x", 1.0}, {"x", 2.0}}), std::invalid_argument);
}

TEST(Differentiate, Examples) {
  EXPECT_EQ(differentiate(parse("x^2"), "x"), parse("2*x"));
  EXPECT_EQ(differentiate(parse("exp(-x)"), "x"), parse("-exp(-x)"));
  const Expr d = differentiate(parse("tanh(x)"), "x");
  for (double x : {-2.0, -0.3, 0.0, 0.8, 3.0})
    EXPECT_NEAR(eval(d, {{"x", x}}), 1.0 - std::tanh(x) * std::tanh(x), 1e-14);
}

TEST(Differentiate, ParameterDerivative) {
  const Expr d = differentiate(parse("a*tanh(x) + a^2"), "a");
  EXPECT_NEAR(eval(d, {{"a", 3.0}, {"x", 0.5}}), std::tanh(0.5) + 6.0, 1e-14);
}

TEST(Fold, ConstantsAndIdentities) {
  EXPECT_EQ(fold(parse("2*3 + x*1")), parse("6 + x"));
  EXPECT_EQ(fold(parse("-(-x)")), var("x"));
  EXPECT_EQ(fold(parse("0*x + x^1")), var("x"));
  EXPECT_EQ(fold(parse("x - 0")), var("x"));
}

TEST(Substitute, Examples) {
  const Expr shifted = substitute(parse("a - exp(-x)"), "a", parse("a + (-1)"));
  for (double x : {-1.0, 0.0, 2.0})
    EXPECT_NEAR(eval(shifted, {{"a", 2.5}, {"x", x}}), 1.5 - std::exp(-x), 1e-14);
  EXPECT_EQ(substitute(var("x"), "x", num(0)), num(0));
  const Expr s = substitute(parse("a*tanh(x)"), "a", parse("a + eta"));
  EXPECT_NEAR(eval(s, {{"a", 4.0}, {"eta", -1.0}, {"x", 20.0}}), 3.0, 1e-12);
}

TEST(Substitute, RejectsInvalidName) {
  EXPECT_THROW(substitute(var("x"), "2x", num(1)), std::invalid_argument);
}

TEST(FreeVariables, Collects) {
  EXPECT_EQ(free_variables(parse("a*x + exp(b)")), (std::set<std::string>{"a", "b", "x"}));
}

// ---------------------------------------------------------------------------
// properties over random expressions

TEST(Property, DerivativeMatchesFiniteDifference) {
  const auto result = testing_support::check_derivatives(20240601, 100);
  EXPECT_EQ(result.accepted, 100);
  EXPECT_LE(result.worst, 1.0) << result.worst_case;
}

TEST(Property, ParsePrintRoundTrip) {
  RandomExpr rnd(7);
  for (int i = 0; i < 200; ++i) {
    const Expr e = rnd(5);
    const std::string printed = to_string(e);
    const Expr once = parse(printed);
    EXPECT_EQ(parse(to_string(once)), once) << printed;
  }
}

TEST(Property, SubstituteIdentity) {
  RandomExpr rnd(11);
  for (int i = 0; i < 200; ++i) {
    const Expr e = rnd(5);
    EXPECT_EQ(substitute(e, "a", var("a")), e);
    EXPECT_EQ(substitute(e, "x", var("x")), e);
  }
}
