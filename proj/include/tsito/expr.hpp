#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tsito {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : std::runtime_error(message + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Evaluation left the domain of a node (log of a non-positive value, zero divisor).
class DomainError : public std::runtime_error {
 public:
  DomainError(const std::string& message, std::string node)
      : std::runtime_error(message + " in " + node), node_(std::move(node)) {}
  const std::string& node() const { return node_; }

 private:
  std::string node_;
};

enum class Var { t, x };

enum class Op { constant, variable, add, sub, mul, div, pow, exp, sin, cos, log };

struct Node;

/// Immutable expression tree over the variables t and x.
class Expr {
 public:
  Expr();  // constant 0
  static Expr constant(double value);
  static Expr variable(Var v);

  Op op() const;
  double value() const;     // constant nodes
  Var var() const;          // variable nodes
  int exponent() const;     // pow nodes
  Expr lhs() const;  // operand of unary nodes, left operand of binary ones
  Expr rhs() const;

  bool is_constant() const { return op() == Op::constant; }
  bool is_constant(double v) const { return is_constant() && value() == v; }
  bool depends_on(Var v) const;

  double eval(double t, double x) const;

  /// Fully parenthesized text that parses back to the same tree.
  std::string to_string() const;

  friend bool structurally_equal(const Expr& a, const Expr& b);

  // Folding constructors: c1 op c2 is evaluated, 0*u -> 0, 1*u -> u, u+0 -> u, ...
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr pow(const Expr& base, int exponent);
  friend Expr exp(const Expr& e);
  friend Expr sin(const Expr& e);
  friend Expr cos(const Expr& e);
  friend Expr log(const Expr& e);

 private:
  friend class Parser;

  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr make(Op op, Expr a, Expr b = {}, int exponent = 0);
  static Expr from_node(const Node& n);
  static double eval_node(const Node& n, double t, double x);

  std::shared_ptr<const Node> node_;
};

/// Grammar: numbers, t, x, + - * / ^, parentheses, exp/sin/cos/log(...).
/// Precedence: ^ > unary - > * / > + -, binary operators left-associative.
/// The exponent of ^ is a non-negative integer literal.
Expr parse(std::string_view source);

Expr diff(const Expr& e, Var v);

/// f together with the partials the Itô formulas need.
struct FunctionSpec {
  Expr f;
  Expr f_t;
  Expr f_x;
  Expr f_xx;

  static FunctionSpec from(Expr f);
  static FunctionSpec parse(std::string_view source) { return from(tsito::parse(source)); }
};

/// Smooth test functions used by the verification suites.
const std::vector<std::string>& function_catalog();

}  // namespace tsito
