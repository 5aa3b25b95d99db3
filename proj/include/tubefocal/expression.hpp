#pragma once

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tubefocal/errors.hpp"
#include "tubefocal/jet.hpp"

namespace tubefocal {

// ---------------------------------------------------------------------------
// Immutable expression trees over one or two real variables.
//
// Grammar (whitespace-insensitive):
//   expr    = term { ("+" | "-") term }
//   term    = unary { ("*" | "/") unary }
//   unary   = "-" unary | power
//   power   = primary [ "^" unary ]        exponent must be constant
//   primary = number | ident | ident "(" expr ")" | "(" expr ")"
//
// Functions: sin cos tan ln sqrt.  Built-in constants: pi, sqrt2, e.
// General f^g is rejected at parse time; the exponent subtree is folded to a
// double so that powers differentiate through jets with closed-form rules.
// ---------------------------------------------------------------------------

enum class UnaryOp { Neg, Sin, Cos, Tan, Log, Sqrt };
enum class BinaryOp { Add, Sub, Mul, Div };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum class Kind { Literal, Constant, Variable, Unary, Binary, Pow };
  Kind kind = Kind::Literal;
  double value = 0.0;  // Literal/Constant value; Pow exponent
  int index = -1;      // Variable slot
  std::string name;    // Variable/Constant spelling
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  ExprPtr a, b;
};

// declared variables and named constants visible to the parser
struct SymbolTable {
  std::vector<std::string> variables;
  std::vector<std::pair<std::string, double>> constants;

  static SymbolTable curve();          // variable u
  static SymbolTable surface();        // variables s, t
  static SymbolTable constants_only();

  SymbolTable& add_constant(const std::string& name, double value) {
    constants.emplace_back(name, value);
    return *this;
  }
};

class ExprTree {
 public:
  ExprTree() = default;
  ExprTree(ExprPtr root, std::vector<std::string> variables)
      : root_(std::move(root)), variables_(std::move(variables)) {}

  bool empty() const { return root_ == nullptr; }
  const ExprNode& root() const { return *root_; }
  const std::vector<std::string>& variables() const { return variables_; }

  std::string str() const;  // minimal-paren form; reparses to the same tree

  friend bool operator==(const ExprTree& a, const ExprTree& b);

 private:
  ExprPtr root_;
  std::vector<std::string> variables_;
};

ExprTree parse_expr(const std::string& text, const SymbolTable& symbols = SymbolTable::curve());

bool contains_variable(const ExprNode& n);

namespace detail {

inline bool exponent_is_integer(double p) {
  return std::floor(p) == p && std::abs(p) < 9.007199254740992e15;
}

template <class S>
S eval_node(const ExprNode& n, std::span<const S> vars) {
  switch (n.kind) {
    case ExprNode::Kind::Literal:
    case ExprNode::Kind::Constant:
      return S(n.value);
    case ExprNode::Kind::Variable:
      return vars[static_cast<size_t>(n.index)];
    case ExprNode::Kind::Unary: {
      const S x = eval_node(*n.a, vars);
      switch (n.uop) {
        case UnaryOp::Neg:
          return -x;
        case UnaryOp::Sin:
          return sin(x);
        case UnaryOp::Cos:
          return cos(x);
        case UnaryOp::Tan:
          if (std::abs(std::cos(primal(x))) <= 1e-12) throw DomainError("tan at pole");
          return tan(x);
        case UnaryOp::Log:
          if (primal(x) <= 0.0) throw DomainError("ln of non-positive value");
          return log(x);
        case UnaryOp::Sqrt:
          if (primal(x) < 0.0) throw DomainError("sqrt of negative value");
          return sqrt(x);
      }
      throw DomainError("unreachable unary op");
    }
    case ExprNode::Kind::Binary: {
      const S x = eval_node(*n.a, vars);
      const S y = eval_node(*n.b, vars);
      switch (n.bop) {
        case BinaryOp::Add:
          return x + y;
        case BinaryOp::Sub:
          return x - y;
        case BinaryOp::Mul:
          return x * y;
        case BinaryOp::Div:
          if (primal(y) == 0.0) throw DomainError("division by zero");
          return x / y;
      }
      throw DomainError("unreachable binary op");
    }
    case ExprNode::Kind::Pow: {
      const S x = eval_node(*n.a, vars);
      const double p = n.value;
      const double px = primal(x);
      if (px < 0.0 && !exponent_is_integer(p)) throw DomainError("negative base with non-integer exponent");
      if (px == 0.0 && !((exponent_is_integer(p) && p >= 0.0) || p >= 3.0))
        throw DomainError("zero base with exponent that leaves derivatives unbounded");
      return pow(x, p);
    }
  }
  throw DomainError("unreachable node kind");
}

}  // namespace detail

template <class S>
S eval(const ExprTree& tree, std::span<const S> var_values) {
  const S result = detail::eval_node<S>(tree.root(), var_values);
  if (!all_finite(result)) throw DomainError("expression evaluated to a non-finite value");
  return result;
}

// value and first three derivatives at u (single-variable trees)
inline Jet3d eval_jet3(const ExprTree& tree, double u) {
  const Jet3d seed[1] = {jet_var(u)};
  return eval<Jet3d>(tree, seed);
}

inline double eval_value(const ExprTree& tree, double u) {
  const double seed[1] = {u};
  return eval<double>(tree, seed);
}

}  // namespace tubefocal
