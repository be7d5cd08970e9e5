#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "gbspec/errors.hpp"

namespace gbspec {

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
  Op op = Op::Const;
  double value = 0.0;  // Const
  std::string name;    // Var, Call
  Expr a, b;           // operands; Call uses `a` only
};

// Syntax errors and unknown identifiers; offset is a byte index into the source.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : ValidationError(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Unbound variable, division by zero, or argument outside a function's domain.
class EvalError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

using Env = std::map<std::string, double, std::less<>>;

/// Variables: x, x1, x2, x3, theta; constant: pi. Functions: sin cos tan exp
/// log sqrt sinh cosh. Precedence: ^ (right) > unary - > * / > + -.
Expr parse(std::string_view src);
double evaluate(const Expr& e, const Env& env);
Expr differentiate(const Expr& e, std::string_view var);

// Minimal-parenthesis form; parse(to_string(e)) rebuilds the same tree.
std::string to_string(const Expr& e);

Expr make_const(double v);
Expr make_var(std::string name);

bool depends_on(const Expr& e, std::string_view var);

/// Expression bound to one free variable, callable as a real function.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(Expr e, std::string var = "x") : expr_(std::move(e)), var_(std::move(var)) {}
  static ScalarField parse(std::string_view src, std::string var = "x") {
    return ScalarField(gbspec::parse(src), std::move(var));
  }
  static ScalarField constant(double v, std::string var = "x") { return ScalarField(make_const(v), std::move(var)); }

  double operator()(double t) const { return evaluate(expr_, Env{{var_, t}}); }
  ScalarField derivative() const { return ScalarField(differentiate(expr_, var_), var_); }
  const Expr& expr() const { return expr_; }
  const std::string& var() const { return var_; }
  std::string str() const { return to_string(expr_); }
  explicit operator bool() const { return static_cast<bool>(expr_); }

 private:
  Expr expr_;
  std::string var_ = "x";
};

}  // namespace gbspec
