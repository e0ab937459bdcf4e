#include "tsito/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace tsito {

struct Node {
  Op op = Op::constant;
  double value = 0.0;
  Var var = Var::x;
  int exponent = 0;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

const std::shared_ptr<const Node>& zero_node() {
  static const auto node = std::make_shared<const Node>();
  return node;
}

const char* func_name(Op op) {
  switch (op) {
    case Op::exp: return "exp";
    case Op::sin: return "sin";
    case Op::cos: return "cos";
    case Op::log: return "log";
    default: return "";
  }
}

char op_symbol(Op op) {
  switch (op) {
    case Op::add: return '+';
    case Op::sub: return '-';
    case Op::mul: return '*';
    case Op::div: return '/';
    default: return '?';
  }
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

Expr::Expr() : node_(zero_node()) {}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->op = Op::constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(Var v) {
  auto n = std::make_shared<Node>();
  n->op = Op::variable;
  n->var = v;
  return Expr(std::move(n));
}

Expr Expr::make(Op op, Expr a, Expr b, int exponent) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a.node_);
  n->b = std::move(b.node_);
  n->exponent = exponent;
  return Expr(std::move(n));
}

Op Expr::op() const { return node_->op; }
double Expr::value() const { return node_->value; }
Var Expr::var() const { return node_->var; }
int Expr::exponent() const { return node_->exponent; }
Expr Expr::lhs() const { return node_->a ? Expr(node_->a) : Expr(); }
Expr Expr::rhs() const { return node_->b ? Expr(node_->b) : Expr(); }

bool Expr::depends_on(Var v) const {
  switch (op()) {
    case Op::constant: return false;
    case Op::variable: return var() == v;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div: return lhs().depends_on(v) || rhs().depends_on(v);
    default: return lhs().depends_on(v);
  }
}

double Expr::eval_node(const Node& n, double t, double x) {
  switch (n.op) {
    case Op::constant: return n.value;
    case Op::variable: return n.var == Var::t ? t : x;
    case Op::add: return eval_node(*n.a, t, x) + eval_node(*n.b, t, x);
    case Op::sub: return eval_node(*n.a, t, x) - eval_node(*n.b, t, x);
    case Op::mul: return eval_node(*n.a, t, x) * eval_node(*n.b, t, x);
    case Op::div: {
      const double d = eval_node(*n.b, t, x);
      if (d == 0.0) throw DomainError("division by zero", Expr::from_node(n).to_string());
      return eval_node(*n.a, t, x) / d;
    }
    case Op::pow: return std::pow(eval_node(*n.a, t, x), n.exponent);
    case Op::exp: return std::exp(eval_node(*n.a, t, x));
    case Op::sin: return std::sin(eval_node(*n.a, t, x));
    case Op::cos: return std::cos(eval_node(*n.a, t, x));
    case Op::log: {
      const double arg = eval_node(*n.a, t, x);
      if (!(arg > 0.0)) {
        throw DomainError("log of non-positive value " + format_number(arg), Expr::from_node(n).to_string());
      }
      return std::log(arg);
    }
  }
  return 0.0;
}

double Expr::eval(double t, double x) const { return eval_node(*node_, t, x); }

Expr Expr::from_node(const Node& n) {
  // Only used on error paths; copies the node shallowly.
  return Expr(std::make_shared<const Node>(n));
}

std::string Expr::to_string() const {
  switch (op()) {
    case Op::constant: {
      auto s = format_number(value());
      return std::signbit(value()) ? "(" + s + ")" : s;
    }
    case Op::variable: return var() == Var::t ? "t" : "x";
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div: return "(" + lhs().to_string() + op_symbol(op()) + rhs().to_string() + ")";
    case Op::pow: return "(" + lhs().to_string() + "^" + std::to_string(exponent()) + ")";
    default: return std::string(func_name(op())) + "(" + lhs().to_string() + ")";
  }
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::constant: return a.value() == b.value() && std::signbit(a.value()) == std::signbit(b.value());
    case Op::variable: return a.var() == b.var();
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div: return structurally_equal(a.lhs(), b.lhs()) && structurally_equal(a.rhs(), b.rhs());
    case Op::pow: return a.exponent() == b.exponent() && structurally_equal(a.lhs(), b.lhs());
    default: return structurally_equal(a.lhs(), b.lhs());
  }
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() + b.value());
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return Expr::make(Op::add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() - b.value());
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return Expr::constant(-1.0) * b;
  return Expr::make(Op::sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() * b.value());
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  return Expr::make(Op::mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && b.value() != 0.0) return Expr::constant(a.value() / b.value());
  if (b.is_constant(1.0)) return a;
  // 0/u is kept: folding it away would hide a zero divisor.
  return Expr::make(Op::div, a, b);
}

Expr pow(const Expr& base, int exponent) {
  if (exponent < 0) throw std::invalid_argument("integer powers need a non-negative exponent");
  if (exponent == 0) return Expr::constant(1.0);
  if (exponent == 1) return base;
  if (base.is_constant()) return Expr::constant(std::pow(base.value(), exponent));
  return Expr::make(Op::pow, base, {}, exponent);
}

Expr exp(const Expr& e) {
  if (e.is_constant()) return Expr::constant(std::exp(e.value()));
  return Expr::make(Op::exp, e);
}

Expr sin(const Expr& e) {
  if (e.is_constant()) return Expr::constant(std::sin(e.value()));
  return Expr::make(Op::sin, e);
}

Expr cos(const Expr& e) {
  if (e.is_constant()) return Expr::constant(std::cos(e.value()));
  return Expr::make(Op::cos, e);
}

Expr log(const Expr& e) {
  if (e.is_constant() && e.value() > 0.0) return Expr::constant(std::log(e.value()));
  return Expr::make(Op::log, e);
}

Expr diff(const Expr& e, Var v) {
  switch (e.op()) {
    case Op::constant: return Expr::constant(0.0);
    case Op::variable: return Expr::constant(e.var() == v ? 1.0 : 0.0);
    case Op::add: return diff(e.lhs(), v) + diff(e.rhs(), v);
    case Op::sub: return diff(e.lhs(), v) - diff(e.rhs(), v);
    case Op::mul: return diff(e.lhs(), v) * e.rhs() + e.lhs() * diff(e.rhs(), v);
    case Op::div:
      return (diff(e.lhs(), v) * e.rhs() - e.lhs() * diff(e.rhs(), v)) / pow(e.rhs(), 2);
    case Op::pow:
      return Expr::constant(e.exponent()) * pow(e.lhs(), e.exponent() - 1) * diff(e.lhs(), v);
    case Op::exp: return e * diff(e.lhs(), v);
    case Op::sin: return cos(e.lhs()) * diff(e.lhs(), v);
    case Op::cos: return Expr::constant(-1.0) * sin(e.lhs()) * diff(e.lhs(), v);
    case Op::log: return diff(e.lhs(), v) / e.lhs();
  }
  return Expr::constant(0.0);
}

// Recursive-descent parser. Builds raw nodes so that printing and reparsing
// reproduces the tree; only a unary minus directly on a literal is folded.
class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr parse_all() {
    Expr e = expression();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expression() {
    Expr e = term();
    for (;;) {
      if (accept('+')) {
        e = Expr::make(Op::add, e, term());
      } else if (accept('-')) {
        e = Expr::make(Op::sub, e, term());
      } else {
        return e;
      }
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e = Expr::make(Op::mul, e, unary());
      } else if (accept('/')) {
        e = Expr::make(Op::div, e, unary());
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) {
      Expr operand = unary();
      if (operand.is_constant()) return Expr::constant(-operand.value());
      return Expr::make(Op::mul, Expr::constant(-1.0), operand);
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a non-negative integer exponent");
    int k = 0;
    const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, k);
    if (res.ec != std::errc{}) {
      pos_ = start;
      fail("exponent out of range");
    }
    return Expr::make(Op::pow, base, {}, k);
  }

  Expr primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expression();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr number() {
    double v = 0.0;
    const auto res = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), v);
    if (res.ec != std::errc{}) fail("malformed number");
    pos_ = static_cast<std::size_t>(res.ptr - src_.data());
    return Expr::constant(v);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "t") return Expr::variable(Var::t);
    if (name == "x") return Expr::variable(Var::x);
    Op op;
    if (name == "exp") {
      op = Op::exp;
    } else if (name == "sin") {
      op = Op::sin;
    } else if (name == "cos") {
      op = Op::cos;
    } else if (name == "log") {
      op = Op::log;
    } else {
      pos_ = start;
      fail("unknown identifier '" + std::string(name) + "'");
    }
    expect('(');
    Expr arg = expression();
    expect(')');
    return Expr::make(op, arg);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

Expr parse(std::string_view source) { return Parser(source).parse_all(); }

FunctionSpec FunctionSpec::from(Expr f) {
  FunctionSpec fs;
  fs.f_t = diff(f, Var::t);
  fs.f_x = diff(f, Var::x);
  fs.f_xx = diff(fs.f_x, Var::x);
  fs.f = std::move(f);
  return fs;
}

const std::vector<std::string>& function_catalog() {
  static const std::vector<std::string> catalog = {
      "x^2",         "t*x",           "exp(x)",        "sin(t*x)",  "x^3 - t*x",
      "t^2*cos(x)",  "exp(t)*x^2",    "log(1 + x^2)",  "x/(1 + t)", "sin(x)*cos(t) + 2",
  };
  return catalog;
}

}  // namespace tsito
