#include "gbspec/expr.hpp"

#include <array>
#include <charconv>
#include <cctype>
#include <cmath>
#include <numbers>

namespace gbspec {

using Op = ExprNode::Op;

namespace {

constexpr std::array<std::string_view, 5> kVariables{"x", "x1", "x2", "x3", "theta"};
constexpr std::array<std::string_view, 8> kFunctions{"sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh"};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& set, std::string_view s) {
  for (auto v : set)
    if (v == s) return true;
  return false;
}

Expr node(Op op, Expr a = nullptr, Expr b = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

Expr call(std::string name, Expr arg) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Call;
  n->name = std::move(name);
  n->a = std::move(arg);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : s_(src) {}

  Expr run() {
    Expr e = expression();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  Expr expression() {
    Expr lhs = term();
    for (char c; (c = peek()) == '+' || c == '-';) {
      ++pos_;
      lhs = node(c == '+' ? Op::Add : Op::Sub, lhs, term());
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = unary();
    for (char c; (c = peek()) == '*' || c == '/';) {
      ++pos_;
      lhs = node(c == '*' ? Op::Mul : Op::Div, lhs, unary());
    }
    return lhs;
  }

  Expr unary() {
    if (peek() == '-') {
      ++pos_;
      return node(Op::Neg, unary());
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (peek() == '^') {
      ++pos_;
      return node(Op::Pow, base, unary());
    }
    return base;
  }

  Expr primary() {
    const char c = peek();
    if (c == '\0') fail("unexpected end of input");
    if (c == '(') {
      ++pos_;
      Expr e = expression();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t nd = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      nd += digits();
    }
    if (nd == 0) fail("malformed number");
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      const std::size_t mark = pos_;
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (digits() == 0) {
        pos_ = mark;
        fail("malformed exponent");
      }
    }
    double v = 0.0;
    const auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (res.ec != std::errc()) {
      pos_ = start;
      fail("malformed number");
    }
    return make_const(v);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string name(s_.substr(start, pos_ - start));
    if (peek() == '(') {
      if (!contains(kFunctions, name)) {
        pos_ = start;
        fail("unknown function '" + name + "'");
      }
      ++pos_;
      Expr arg = expression();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return call(name, arg);
    }
    if (name == "pi") return make_const(std::numbers::pi);
    if (!contains(kVariables, name)) {
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    return make_var(name);
  }
};

bool is_const(const Expr& e, double v) { return e->op == Op::Const && e->value == v; }
bool is_const(const Expr& e) { return e->op == Op::Const; }

// Constructors with light constant folding.
Expr neg(const Expr& a) {
  if (is_const(a)) return make_const(-a->value);
  if (a->op == Op::Neg) return a->a;
  return node(Op::Neg, a);
}

Expr add(const Expr& a, const Expr& b) {
  if (is_const(a) && is_const(b)) return make_const(a->value + b->value);
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  return node(Op::Add, a, b);
}

Expr sub(const Expr& a, const Expr& b) {
  if (is_const(a) && is_const(b)) return make_const(a->value - b->value);
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return neg(b);
  return node(Op::Sub, a, b);
}

Expr mul(const Expr& a, const Expr& b) {
  if (is_const(a) && is_const(b)) return make_const(a->value * b->value);
  if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  return node(Op::Mul, a, b);
}

Expr div(const Expr& a, const Expr& b) {
  if (is_const(a, 0.0)) return make_const(0.0);
  if (is_const(b, 1.0)) return a;
  return node(Op::Div, a, b);
}

Expr pow(const Expr& a, const Expr& b) {
  if (is_const(b, 1.0)) return a;
  if (is_const(b, 0.0)) return make_const(1.0);
  return node(Op::Pow, a, b);
}

double eval(const ExprNode& e, const Env& env) {
  switch (e.op) {
    case Op::Const: return e.value;
    case Op::Var: {
      const auto it = env.find(e.name);
      if (it == env.end()) throw EvalError("unbound variable '" + e.name + "'");
      return it->second;
    }
    case Op::Neg: return -eval(*e.a, env);
    case Op::Add: return eval(*e.a, env) + eval(*e.b, env);
    case Op::Sub: return eval(*e.a, env) - eval(*e.b, env);
    case Op::Mul: return eval(*e.a, env) * eval(*e.b, env);
    case Op::Div: {
      const double num = eval(*e.a, env), den = eval(*e.b, env);
      if (den == 0.0) throw EvalError("division by zero");
      return num / den;
    }
    case Op::Pow: {
      const double base = eval(*e.a, env), ex = eval(*e.b, env);
      if (base < 0.0 && ex != std::floor(ex)) throw EvalError("negative base with non-integer exponent");
      if (base == 0.0 && ex < 0.0) throw EvalError("division by zero");
      return std::pow(base, ex);
    }
    case Op::Call: {
      const double v = eval(*e.a, env);
      const std::string& f = e.name;
      if (f == "sin") return std::sin(v);
      if (f == "cos") return std::cos(v);
      if (f == "tan") return std::tan(v);
      if (f == "exp") return std::exp(v);
      if (f == "sinh") return std::sinh(v);
      if (f == "cosh") return std::cosh(v);
      if (f == "log") {
        if (!(v > 0.0)) throw EvalError("log of non-positive value");
        return std::log(v);
      }
      if (f == "sqrt") {
        if (v < 0.0) throw EvalError("sqrt of negative value");
        return std::sqrt(v);
      }
      throw EvalError("unknown function '" + f + "'");
    }
  }
  return 0.0;
}

int precedence(const ExprNode& e) {
  switch (e.op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    case Op::Const: return e.value < 0.0 ? 3 : 5;
    default: return 5;
  }
}

std::string number_text(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string print(const ExprNode& e);

std::string wrapped(const ExprNode& e, bool parens) {
  return parens ? "(" + print(e) + ")" : print(e);
}

std::string print(const ExprNode& e) {
  const int prec = precedence(e);
  switch (e.op) {
    case Op::Const:
      return e.value < 0.0 ? "-" + number_text(-e.value) : number_text(e.value);
    case Op::Var: return e.name;
    case Op::Call: return e.name + "(" + print(*e.a) + ")";
    case Op::Neg: return "-" + wrapped(*e.a, precedence(*e.a) < 3);
    case Op::Pow: return wrapped(*e.a, precedence(*e.a) <= 4) + "^" + wrapped(*e.b, precedence(*e.b) < 3);
    default: {
      const char* sym = e.op == Op::Add ? "+" : e.op == Op::Sub ? "-" : e.op == Op::Mul ? "*" : "/";
      return wrapped(*e.a, precedence(*e.a) < prec) + sym + wrapped(*e.b, precedence(*e.b) <= prec);
    }
  }
}

}  // namespace

Expr make_const(double v) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Const;
  n->value = v;
  return n;
}

Expr make_var(std::string name) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Var;
  n->name = std::move(name);
  return n;
}

Expr parse(std::string_view src) { return Parser(src).run(); }

double evaluate(const Expr& e, const Env& env) {
  if (!e) throw EvalError("empty expression");
  const double v = eval(*e, env);
  if (!std::isfinite(v)) throw EvalError("non-finite result");
  return v;
}

bool depends_on(const Expr& e, std::string_view var) {
  if (!e) return false;
  if (e->op == Op::Var) return e->name == var;
  return depends_on(e->a, var) || depends_on(e->b, var);
}

Expr differentiate(const Expr& e, std::string_view var) {
  const Expr zero = make_const(0.0);
  if (!depends_on(e, var)) return zero;
  const Expr& a = e->a;
  const Expr& b = e->b;
  switch (e->op) {
    case Op::Const: return zero;
    case Op::Var: return make_const(1.0);
    case Op::Neg: return neg(differentiate(a, var));
    case Op::Add: return add(differentiate(a, var), differentiate(b, var));
    case Op::Sub: return sub(differentiate(a, var), differentiate(b, var));
    case Op::Mul:
      return add(mul(differentiate(a, var), b), mul(a, differentiate(b, var)));
    case Op::Div: {
      if (!depends_on(b, var)) return div(differentiate(a, var), b);
      // (a'b - ab') / b^2
      return div(sub(mul(differentiate(a, var), b), mul(a, differentiate(b, var))), pow(b, make_const(2.0)));
    }
    case Op::Pow: {
      if (!depends_on(b, var)) {
        const Expr ex = is_const(b) ? make_const(b->value - 1.0) : sub(b, make_const(1.0));
        return mul(mul(b, pow(a, ex)), differentiate(a, var));
      }
      // a^b (b' log a + b a'/a)
      const Expr inner = add(mul(differentiate(b, var), call("log", a)), div(mul(b, differentiate(a, var)), a));
      return mul(e, inner);
    }
    case Op::Call: {
      const Expr da = differentiate(a, var);
      const std::string& f = e->name;
      Expr outer;
      if (f == "sin") outer = call("cos", a);
      else if (f == "cos") outer = neg(call("sin", a));
      else if (f == "tan") outer = div(make_const(1.0), pow(call("cos", a), make_const(2.0)));
      else if (f == "exp") outer = e;
      else if (f == "log") return div(da, a);
      else if (f == "sqrt") return div(da, mul(make_const(2.0), e));
      else if (f == "sinh") outer = call("cosh", a);
      else if (f == "cosh") outer = call("sinh", a);
      else throw EvalError("unknown function '" + f + "'");
      return mul(outer, da);
    }
  }
  return zero;
}

std::string to_string(const Expr& e) { return e ? print(*e) : std::string(); }

}  // namespace gbspec
