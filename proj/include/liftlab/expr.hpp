#pragma once

// Closed-form scalar expressions of chart variables.
//
// Grammar (highest precedence first):
//   primary  := number | name | name '(' sum ')' | '(' sum ')'
//   power    := primary ['^' unary]          (right associative)
//   unary    := '-' unary | power
//   product  := unary {('*' | '/') unary}
//   sum      := product {('+' | '-') product}
//
// Functions: sin cos tan exp log sinh cosh sqrt.  Constant: pi.

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "liftlab/dual.hpp"
#include "liftlab/errors.hpp"

namespace liftlab {

enum class Op {
  constant,
  variable,
  neg,
  sin,
  cos,
  tan,
  exp,
  log,
  sinh,
  cosh,
  sqrt,
  add,
  sub,
  mul,
  div,
  pow,
};

struct Node {
  Op op = Op::constant;
  double value = 0.0;  // constant
  int index = -1;      // variable
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

using NodePtr = std::shared_ptr<const Node>;

/// Evaluation tape entry (postfix order).
struct Instr {
  Op op;
  double value;      // constant, or constant exponent for pow_const
  int index;         // variable index
  bool const_pow;    // pow with variable-free exponent
  const Node* node;  // for diagnostics
};

/// Immutable parsed expression over a fixed list of variables.
class Expr {
 public:
  Expr() = default;
  Expr(NodePtr root, std::shared_ptr<const std::vector<std::string>> names);

  const Node& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }
  int dim() const { return static_cast<int>(names_->size()); }
  const std::vector<std::string>& variable_names() const { return *names_; }
  bool empty() const { return !root_; }

  /// True when the expression does not reference the variable.
  bool independent_of(int index) const;

  template <class S>
  S eval(std::span<const S> vars) const;

  std::string to_string() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  NodePtr root_;
  std::shared_ptr<const std::vector<std::string>> names_;
  std::vector<Instr> tape_;
  int max_stack_ = 0;
};

/// Parse with variables x1..x{dim}.
Expr parse(std::string_view source, int dim);

/// Parse with an explicit variable list (e.g. x1..xn, y1..yn on the tangent bundle).
Expr parse(std::string_view source, std::shared_ptr<const std::vector<std::string>> names);

/// Names x1..xn.
std::shared_ptr<const std::vector<std::string>> chart_names(int dim);
/// Names x1..xn, y1..yn.
std::shared_ptr<const std::vector<std::string>> bundle_names(int dim);

/// Constant expression (used for catalog construction).
Expr constant_expr(double value, int dim);

std::string node_to_string(const Node& node, const std::vector<std::string>& names);
bool structurally_equal(const Node& a, const Node& b);

double eval(const Expr& e, std::span<const double> point);

/// Exact partial derivative by dual-number evaluation.
/// order 1: d/dx_{wrt_i};  order 2: d^2/(dx_{wrt_i} dx_{wrt_j}).
double derivative(const Expr& e, std::span<const double> point, int wrt_i);
double derivative(const Expr& e, std::span<const double> point, int wrt_i, int wrt_j);

[[noreturn]] void throw_domain(const Node* node, const std::vector<std::string>& names,
                               const std::string& what);

namespace detail {

template <class S>
S apply_unary(Op op, const S& a) {
  switch (op) {
    case Op::neg: return -a;
    case Op::sin: return sin(a);
    case Op::cos: return cos(a);
    case Op::tan: return tan(a);
    case Op::exp: return exp(a);
    case Op::log: return log(a);
    case Op::sinh: return sinh(a);
    case Op::cosh: return cosh(a);
    case Op::sqrt: return sqrt(a);
    default: return a;
  }
}

}  // namespace detail

template <class S>
S Expr::eval(std::span<const S> vars) const {
  thread_local std::vector<S> stack;
  if (static_cast<int>(stack.size()) < max_stack_) stack.resize(max_stack_);
  int top = 0;
  for (const Instr& in : tape_) {
    switch (in.op) {
      case Op::constant:
        stack[top++] = S(in.value);
        break;
      case Op::variable:
        stack[top++] = vars[in.index];
        break;
      case Op::neg:
      case Op::sin:
      case Op::cos:
      case Op::tan:
      case Op::exp:
      case Op::sinh:
      case Op::cosh:
        stack[top - 1] = detail::apply_unary(in.op, stack[top - 1]);
        break;
      case Op::log:
        if (primal(stack[top - 1]) <= 0.0) throw_domain(in.node, *names_, "log of nonpositive value");
        stack[top - 1] = log(stack[top - 1]);
        break;
      case Op::sqrt:
        if (primal(stack[top - 1]) < 0.0) throw_domain(in.node, *names_, "sqrt of negative value");
        stack[top - 1] = sqrt(stack[top - 1]);
        break;
      case Op::add:
        --top;
        stack[top - 1] = stack[top - 1] + stack[top];
        break;
      case Op::sub:
        --top;
        stack[top - 1] = stack[top - 1] - stack[top];
        break;
      case Op::mul:
        --top;
        stack[top - 1] = stack[top - 1] * stack[top];
        break;
      case Op::div:
        --top;
        if (primal(stack[top]) == 0.0) throw_domain(in.node, *names_, "division by zero");
        stack[top - 1] = stack[top - 1] / stack[top];
        break;
      case Op::pow: {
        if (in.const_pow) {
          const double base = primal(stack[top - 1]);
          const double c = in.value;
          if (base < 0.0 && c != std::floor(c))
            throw_domain(in.node, *names_, "non-integer power of negative base");
          if (base == 0.0 && c < 0.0) throw_domain(in.node, *names_, "negative power of zero");
          stack[top - 1] = pow_const(stack[top - 1], c);
        } else {
          --top;
          if (primal(stack[top - 1]) <= 0.0)
            throw_domain(in.node, *names_, "variable exponent requires positive base");
          stack[top - 1] = exp(stack[top] * log(stack[top - 1]));
        }
        break;
      }
    }
  }
  S result = stack[0];
  if (!std::isfinite(primal(result))) throw_domain(&root(), *names_, "non-finite value");
  return result;
}

}  // namespace liftlab
