#include "kairon/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace kairon {

double bump(double x) {
  if (!(std::abs(x) < 1.0)) return 0.0;
  return std::exp(-1.0 / (1.0 - x * x));
}

namespace detail {

enum class Fn { Exp, Sin, Cos, Sqrt, Abs, Tanh, Bump };

struct Node {
  enum class Kind { Number, Variable, Unary, Binary, Call } kind;
  double value = 0.0;  // Number
  int var = 0;         // Variable: 0 = t, k = w_k
  char op = 0;         // Unary/Binary operator
  Fn fn = Fn::Exp;     // Call
  std::shared_ptr<const Node> lhs, rhs;
};

using NodePtr = std::shared_ptr<const Node>;

namespace {

NodePtr make_number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Number;
  n->value = v;
  return n;
}

NodePtr make_variable(int var) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Variable;
  n->var = var;
  return n;
}

NodePtr make_unary(NodePtr child) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Unary;
  n->op = '-';
  n->lhs = std::move(child);
  return n;
}

NodePtr make_binary(char op, NodePtr l, NodePtr r) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Binary;
  n->op = op;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

NodePtr make_call(Fn fn, NodePtr arg) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Call;
  n->fn = fn;
  n->lhs = std::move(arg);
  return n;
}

const char* fn_name(Fn f) {
  switch (f) {
    case Fn::Exp: return "exp";
    case Fn::Sin: return "sin";
    case Fn::Cos: return "cos";
    case Fn::Sqrt: return "sqrt";
    case Fn::Abs: return "abs";
    case Fn::Tanh: return "tanh";
    case Fn::Bump: return "bump";
  }
  return "?";
}

bool lookup_fn(std::string_view name, Fn& out) {
  if (name == "exp") { out = Fn::Exp; return true; }
  if (name == "sin") { out = Fn::Sin; return true; }
  if (name == "cos") { out = Fn::Cos; return true; }
  if (name == "sqrt") { out = Fn::Sqrt; return true; }
  if (name == "abs") { out = Fn::Abs; return true; }
  if (name == "tanh") { out = Fn::Tanh; return true; }
  if (name == "bump") { out = Fn::Bump; return true; }
  return false;
}

class Parser {
public:
  Parser(std::string_view src, int m) : src_(src), m_(m) {}

  NodePtr run() {
    NodePtr e = expression();
    skip_space();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const {
    int line = 1, col = 1;
    for (std::size_t k = 0; k < pos_ && k < src_.size(); ++k) {
      if (src_[k] == '\n') { ++line; col = 1; } else { ++col; }
    }
    std::ostringstream os;
    os << "parse error at line " << line << ", column " << col << " (offset " << pos_ << "): " << msg;
    throw ParseError(os.str(), static_cast<int>(pos_), line, col);
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  char peek() {
    skip_space();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  bool consume(char c) {
    if (peek() == c) { ++pos_; return true; }
    return false;
  }

  NodePtr expression() {
    NodePtr e = term();
    for (;;) {
      const char c = peek();
      if (c != '+' && c != '-') return e;
      ++pos_;
      e = make_binary(c, std::move(e), term());
    }
  }

  NodePtr term() {
    NodePtr e = unary();
    for (;;) {
      const char c = peek();
      if (c != '*' && c != '/') return e;
      ++pos_;
      e = make_binary(c, std::move(e), unary());
    }
  }

  NodePtr unary() {
    if (consume('-')) return make_unary(unary());
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (consume('^')) return make_binary('^', std::move(base), unary());
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expression();
      if (!consume(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_ + 1;
      if (mark < src_.size() && (src_[mark] == '+' || src_[mark] == '-')) ++mark;
      if (mark < src_.size() && std::isdigit(static_cast<unsigned char>(src_[mark]))) {
        pos_ = mark;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    if (pos_ == start || (pos_ == start + 1 && src_[start] == '.')) {
      pos_ = start;
      fail("malformed number");
    }
    const std::string tok(src_.substr(start, pos_ - start));
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) {
      pos_ = start;
      fail("malformed number");
    }
    return make_number(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);

    Fn fn;
    if (lookup_fn(name, fn)) {
      if (!consume('(')) {
        pos_ = start;
        fail("function '" + std::string(name) + "' requires an argument list");
      }
      NodePtr arg = expression();
      if (!consume(')')) fail("expected ')'");
      return make_call(fn, std::move(arg));
    }
    if (name == "t") return make_variable(0);
    if (name.size() >= 2 && name[0] == 'w') {
      bool digits = true;
      for (std::size_t k = 1; k < name.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(name[k]))) digits = false;
      if (digits) {
        const int k = std::atoi(std::string(name.substr(1)).c_str());
        if (k >= 1 && k <= m_) return make_variable(k);
        pos_ = start;
        fail("unknown variable '" + std::string(name) + "' for m = " + std::to_string(m_));
      }
    }
    pos_ = start;
    fail("unknown identifier '" + std::string(name) + "'");
  }

  std::string_view src_;
  int m_;
  std::size_t pos_ = 0;
};

double eval_node(const Node& n, double t, std::span<const double> w) {
  switch (n.kind) {
    case Node::Kind::Number:
      return n.value;
    case Node::Kind::Variable:
      return n.var == 0 ? t : w[n.var - 1];
    case Node::Kind::Unary:
      return -eval_node(*n.lhs, t, w);
    case Node::Kind::Binary: {
      const double a = eval_node(*n.lhs, t, w);
      const double b = eval_node(*n.rhs, t, w);
      switch (n.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/':
          if (b == 0.0) throw EvalError("division by zero");
          return a / b;
        case '^': {
          const double r = std::pow(a, b);
          if (std::isnan(r)) throw EvalError("fractional power of a negative base");
          if (std::isinf(r) && a == 0.0 && b < 0.0) throw EvalError("division by zero (zero base, negative exponent)");
          return r;
        }
      }
      throw EvalError("corrupt expression node");
    }
    case Node::Kind::Call: {
      const double a = eval_node(*n.lhs, t, w);
      switch (n.fn) {
        case Fn::Exp: return std::exp(a);
        case Fn::Sin: return std::sin(a);
        case Fn::Cos: return std::cos(a);
        case Fn::Sqrt:
          if (a < 0.0) throw EvalError("square root of a negative number");
          return std::sqrt(a);
        case Fn::Abs: return std::abs(a);
        case Fn::Tanh: return std::tanh(a);
        case Fn::Bump: return bump(a);
      }
      throw EvalError("corrupt expression node");
    }
  }
  throw EvalError("corrupt expression node");
}

void print_node(const Node& n, std::string& out) {
  char buf[40];
  switch (n.kind) {
    case Node::Kind::Number:
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      return;
    case Node::Kind::Variable:
      if (n.var == 0) out += 't';
      else { out += 'w'; out += std::to_string(n.var); }
      return;
    case Node::Kind::Unary:
      out += "(-";
      print_node(*n.lhs, out);
      out += ')';
      return;
    case Node::Kind::Binary:
      out += '(';
      print_node(*n.lhs, out);
      out += n.op;
      print_node(*n.rhs, out);
      out += ')';
      return;
    case Node::Kind::Call:
      out += fn_name(n.fn);
      out += '(';
      print_node(*n.lhs, out);
      out += ')';
      return;
  }
}

bool nodes_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Node::Kind::Number: return a.value == b.value;
    case Node::Kind::Variable: return a.var == b.var;
    case Node::Kind::Unary: return nodes_equal(*a.lhs, *b.lhs);
    case Node::Kind::Binary: return a.op == b.op && nodes_equal(*a.lhs, *b.lhs) && nodes_equal(*a.rhs, *b.rhs);
    case Node::Kind::Call: return a.fn == b.fn && nodes_equal(*a.lhs, *b.lhs);
  }
  return false;
}

}  // namespace
}  // namespace detail

Expression Expression::parse(std::string_view source, int m) {
  checked_spatial_dim(m);
  detail::Parser p(source, m);
  return Expression(p.run(), m, std::string(source));
}

double Expression::operator()(double t, const UnitDirection& w) const {
  if (w.spatial_dim() != m_) throw EvalError("expression evaluated with wrong spatial dimension");
  std::array<double, kMaxSpatialDim> ws{};
  for (int k = 0; k < m_; ++k) ws[k] = w[k];
  return detail::eval_node(*root_, t, {ws.data(), static_cast<std::size_t>(m_)});
}

double Expression::evaluate(double t, std::span<const double> w) const {
  if (w.size() != static_cast<std::size_t>(m_)) throw EvalError("expression evaluated with wrong spatial dimension");
  return detail::eval_node(*root_, t, w);
}

std::string Expression::to_string() const {
  std::string out;
  detail::print_node(*root_, out);
  return out;
}

bool Expression::same_ast(const Expression& other) const {
  return m_ == other.m_ && detail::nodes_equal(*root_, *other.root_);
}

}  // namespace kairon
