#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kairon/expr.hpp"

using namespace kairon;

namespace {

UnitDirection w3(double a, double b, double c) {
  const std::array<double, 3> v{a, b, c};
  return UnitDirection(3, v);
}

double eval(const std::string& src, int m, double t, const UnitDirection& w) {
  return Expression::parse(src, m)(t, w);
}

}  // namespace

TEST_CASE("parsing and evaluation basics") {
  const UnitDirection w = w3(0, 0, 1);
  CHECK(eval("exp(-t^2)", 3, 0.0, w) == 1.0);
  CHECK(eval("1+2*3", 3, 0.0, w) == 7.0);
  CHECK(eval("(1+2)*3", 3, 0.0, w) == 9.0);
  CHECK(eval("2^3^2", 3, 0.0, w) == 512.0);   // right-associative
  CHECK(eval("-2^2", 3, 0.0, w) == -4.0);     // ^ binds tighter than unary -
  CHECK(eval("2^-3", 3, 0.0, w) == 0.125);
  CHECK(eval("6/3/2", 3, 0.0, w) == 1.0);     // left-associative
  CHECK(eval("1 - 2 - 3", 3, 0.0, w) == -4.0);
  CHECK(eval("tanh(0)", 3, 0.0, w) == 0.0);
  CHECK(eval("abs(-2.5)", 3, 0.0, w) == 2.5);
  CHECK(eval("sqrt(2.25)", 3, 0.0, w) == 1.5);
  CHECK(eval("1.5e2", 3, 0.0, w) == 150.0);
  CHECK(eval("w3", 3, 0.0, w) == 1.0);
  CHECK(eval("t*w1", 3, 4.0, w3(1, 0, 0)) == 4.0);
}

TEST_CASE("variable arity follows m") {
  CHECK_NOTHROW(Expression::parse("bump(t)*(1+0.5*w3)", 3));
  CHECK_THROWS_AS(Expression::parse("bump(t)*(1+0.5*w3)", 2), ParseError);
  try {
    Expression::parse("bump(t)*(1+0.5*w3)", 2);
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("w3") != std::string::npos);
    CHECK(e.offset == 15);
  }
}

TEST_CASE("syntax errors carry position info") {
  try {
    Expression::parse("1+*2", 3);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset == 2);
    CHECK(e.line == 1);
    CHECK(e.column == 3);
  }
  CHECK_THROWS_AS(Expression::parse("", 2), ParseError);
  CHECK_THROWS_AS(Expression::parse("sin", 2), ParseError);
  CHECK_THROWS_AS(Expression::parse("(1+2", 2), ParseError);
  CHECK_THROWS_AS(Expression::parse("1+2)", 2), ParseError);
  CHECK_THROWS_AS(Expression::parse("foo(1)", 2), ParseError);
  CHECK_THROWS_AS(Expression::parse("1..2", 2), ParseError);

  // multi-line sources report line/column
  try {
    Expression::parse("1 +\n * 2", 2);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.column == 2);
  }
}

TEST_CASE("bump has exactly compact support") {
  const UnitDirection w = w3(1, 0, 0);
  const Expression b = Expression::parse("bump(t)", 3);
  CHECK(b(1.0, w) == 0.0);
  CHECK(b(-1.0, w) == 0.0);
  CHECK(b(1.0000001, w) == 0.0);
  CHECK(b(37.0, w) == 0.0);
  CHECK(b(0.0, w) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(b(0.0, w) == doctest::Approx(0.3678794411714423).epsilon(1e-12));
  CHECK(b(0.5, w) > 0.0);

  CHECK(bump(0.99) > 0.0);
  CHECK(bump(1.0) == 0.0);
}

TEST_CASE("unit norm identity evaluates to one") {
  rng::Stream s(8);
  const Expression e = Expression::parse("w1^2+w2^2+w3^2", 3);
  for (int k = 0; k < 100; ++k) {
    const UnitDirection w = random_direction(3, s);
    CHECK(std::abs(e(0.0, w) - 1.0) <= 1e-12);
  }
}

TEST_CASE("domain errors are reported") {
  const UnitDirection w = w3(1, 0, 0);
  CHECK_THROWS_AS(eval("1/ (t)", 3, 0.0, w), EvalError);
  CHECK_THROWS_AS(eval("sqrt(-1)", 3, 0.0, w), EvalError);
  CHECK_THROWS_AS(eval("(-8)^(1/2)", 3, 0.0, w), EvalError);
  CHECK_THROWS_AS(eval("t^-1", 3, 0.0, w), EvalError);
  CHECK(eval("(-8)^(1/2+1/2)", 3, 0.0, w) == -8.0);
}

TEST_CASE("print round-trips to an AST-equal expression") {
  const char* sources[] = {
      "exp(-t^2)",
      "bump(t)*(1+0.5*w1)",
      "-t^2+3*w2/(1-w1)",
      "2^-3 - -4",
      "tanh(sin(cos(t)))+sqrt(abs(w2))",
      "1.5e-3*t + 2.25",
  };
  for (const char* src : sources) {
    const Expression e = Expression::parse(src, 2);
    const Expression round = Expression::parse(e.to_string(), 2);
    CHECK(e.same_ast(round));
    CHECK(round.same_ast(e));
  }
  const Expression a = Expression::parse("t+1", 2);
  const Expression b = Expression::parse("1+t", 2);
  CHECK_FALSE(a.same_ast(b));
}

TEST_CASE("evaluation is referentially transparent") {
  const Expression e = Expression::parse("bump(t)*exp(w1)", 2);
  const std::array<double, 2> v{0.6, 0.8};
  const UnitDirection w(2, v);
  const double first = e(0.25, w);
  for (int k = 0; k < 10; ++k) CHECK(e(0.25, w) == first);
}
