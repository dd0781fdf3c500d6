#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "kairon/geometry.hpp"

namespace kairon {

// Closed-form scalar expressions in the variables t, w1..wm.
//
// Grammar (EBNF, also documented in the README):
//
//   expression = term , { ( "+" | "-" ) , term } ;
//   term       = unary , { ( "*" | "/" ) , unary } ;
//   unary      = "-" , unary | power ;
//   power      = primary , [ "^" , unary ] ;             (* right-assoc *)
//   primary    = number | variable | function , "(" , expression , ")"
//              | "(" , expression , ")" ;
//   variable   = "t" | "w1" | ... | "wm" ;
//   function   = "exp" | "sin" | "cos" | "sqrt" | "abs" | "tanh" | "bump" ;
//
// "^" binds tighter than unary minus, so -x^2 means -(x^2); its right operand
// is a unary expression, so 2^-3 parses.  bump(x) = exp(-1/(1-x^2)) for
// |x| < 1 and exactly 0 otherwise (compact support).

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, int offset, int line, int column)
      : std::runtime_error(what), offset(offset), line(line), column(column) {}
  int offset;
  int line;
  int column;
};

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// exp(-1/(1-x^2)) for |x| < 1, exactly 0 for |x| >= 1.
double bump(double x);

namespace detail {
struct Node;
}

class Expression {
public:
  // Throws ParseError (with offset/line/column) on syntax errors and on
  // identifiers unknown for the given m.
  static Expression parse(std::string_view source, int m);

  double operator()(double t, const UnitDirection& w) const;
  double evaluate(double t, std::span<const double> w) const;

  // Fully parenthesized form; parse(to_string(), m) is AST-equal to *this.
  std::string to_string() const;
  bool same_ast(const Expression& other) const;

  int spatial_dim() const { return m_; }
  const std::string& source() const { return source_; }

private:
  Expression(std::shared_ptr<const detail::Node> root, int m, std::string source)
      : root_(std::move(root)), m_(m), source_(std::move(source)) {}
  std::shared_ptr<const detail::Node> root_;
  int m_;
  std::string source_;
};

}  // namespace kairon
