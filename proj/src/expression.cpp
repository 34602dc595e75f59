#include "tcurve/expression.hpp"

#include "tcurve/types.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace tcurve {

struct Expression::Node {
  enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Sinh, Cosh };
  Op op = Op::Const;
  double value = 0.0;
  int var = 0;
  NodePtr a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;
using Op = Node::Op;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr constant(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = v;
  return n;
}

bool is_const(const NodePtr& n, double v) { return n->op == Op::Const && n->value == v; }

NodePtr add(NodePtr a, NodePtr b) {
  if (a->op == Op::Const && b->op == Op::Const) return constant(a->value + b->value);
  if (is_const(a, 0)) return b;
  if (is_const(b, 0)) return a;
  return make(Op::Add, std::move(a), std::move(b));
}

NodePtr sub(NodePtr a, NodePtr b) {
  if (a->op == Op::Const && b->op == Op::Const) return constant(a->value - b->value);
  if (is_const(b, 0)) return a;
  if (is_const(a, 0)) return make(Op::Neg, std::move(b));
  return make(Op::Sub, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
  if (a->op == Op::Const && b->op == Op::Const) return constant(a->value * b->value);
  if (is_const(a, 0) || is_const(b, 0)) return constant(0);
  if (is_const(a, 1)) return b;
  if (is_const(b, 1)) return a;
  return make(Op::Mul, std::move(a), std::move(b));
}

NodePtr div(NodePtr a, NodePtr b) {
  if (is_const(a, 0)) return constant(0);
  if (is_const(b, 1)) return a;
  return make(Op::Div, std::move(a), std::move(b));
}

NodePtr neg(NodePtr a) {
  if (a->op == Op::Const) return constant(-a->value);
  return make(Op::Neg, std::move(a));
}

NodePtr pow_node(NodePtr a, NodePtr b) {
  if (is_const(b, 1)) return a;
  if (is_const(b, 0)) return constant(1);
  if (a->op == Op::Const && b->op == Op::Const) return constant(std::pow(a->value, b->value));
  return make(Op::Pow, std::move(a), std::move(b));
}

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& vars) : text_(text), vars_(vars) {}

  NodePtr run() {
    auto e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      skip_ws();
      if (match('+'))
        lhs = add(lhs, term());
      else if (match('-'))
        lhs = sub(lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    auto lhs = factor();
    for (;;) {
      skip_ws();
      if (match('*'))
        lhs = mul(lhs, factor());
      else if (match('/'))
        lhs = div(lhs, factor());
      else
        return lhs;
    }
  }

  // '^' binds tighter than unary minus and associates right.
  NodePtr factor() {
    skip_ws();
    if (match('-')) return neg(factor());
    auto base = primary();
    skip_ws();
    if (match('^')) return pow_node(base, factor());
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (match('(')) {
      auto e = expr();
      expect(')');
      return e;
    }
    if (pos_ < text_.size() && (std::isdigit((unsigned char)text_[pos_]) || text_[pos_] == '.')) return number();
    if (pos_ < text_.size() && std::isalpha((unsigned char)text_[pos_])) return ident();
    fail("expected a number, name, or parenthesis");
    return nullptr;
  }

  NodePtr number() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<size_t>(end - begin);
    return constant(v);
  }

  NodePtr ident() {
    size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum((unsigned char)text_[pos_]) || text_[pos_] == '_')) ++pos_;
    std::string name = text_.substr(start, pos_ - start);
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      auto arg = expr();
      expect(')');
      if (name == "sin") return make(Op::Sin, arg);
      if (name == "cos") return make(Op::Cos, arg);
      if (name == "sinh") return make(Op::Sinh, arg);
      if (name == "cosh") return make(Op::Cosh, arg);
      fail("unknown function '" + name + "' (have: sin, cos, sinh, cosh)");
    }
    if (name == "pi") return constant(M_PI);
    for (size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) {
        auto n = std::make_shared<Node>();
        n->op = Op::Var;
        n->var = static_cast<int>(i);
        return n;
      }
    fail("unknown name '" + name + "'");
    return nullptr;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace((unsigned char)text_[pos_])) ++pos_;
  }
  bool match(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    skip_ws();
    if (!match(c)) fail(std::string("expected '") + c + "'");
  }
  [[noreturn]] void fail(const std::string& msg) {
    std::ostringstream os;
    os << "expression error at offset " << pos_ << ": " << msg;
    throw ValidationError(os.str());
  }

  const std::string& text_;
  const std::vector<std::string>& vars_;
  size_t pos_ = 0;
};

double eval_node(const Node& n, double x0, double x1) {
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var: return n.var == 0 ? x0 : x1;
    case Op::Add: return eval_node(*n.a, x0, x1) + eval_node(*n.b, x0, x1);
    case Op::Sub: return eval_node(*n.a, x0, x1) - eval_node(*n.b, x0, x1);
    case Op::Mul: return eval_node(*n.a, x0, x1) * eval_node(*n.b, x0, x1);
    case Op::Div: return eval_node(*n.a, x0, x1) / eval_node(*n.b, x0, x1);
    case Op::Pow: return std::pow(eval_node(*n.a, x0, x1), eval_node(*n.b, x0, x1));
    case Op::Neg: return -eval_node(*n.a, x0, x1);
    case Op::Sin: return std::sin(eval_node(*n.a, x0, x1));
    case Op::Cos: return std::cos(eval_node(*n.a, x0, x1));
    case Op::Sinh: return std::sinh(eval_node(*n.a, x0, x1));
    case Op::Cosh: return std::cosh(eval_node(*n.a, x0, x1));
  }
  return 0.0;
}

NodePtr diff(const NodePtr& n, int var) {
  switch (n->op) {
    case Op::Const: return constant(0);
    case Op::Var: return constant(n->var == var ? 1.0 : 0.0);
    case Op::Add: return add(diff(n->a, var), diff(n->b, var));
    case Op::Sub: return sub(diff(n->a, var), diff(n->b, var));
    case Op::Mul: return add(mul(diff(n->a, var), n->b), mul(n->a, diff(n->b, var)));
    case Op::Div:
      return div(sub(mul(diff(n->a, var), n->b), mul(n->a, diff(n->b, var))), mul(n->b, n->b));
    case Op::Pow: {
      if (n->b->op != Op::Const)
        throw ValidationError("cannot differentiate a power with non-constant exponent");
      double c = n->b->value;
      return mul(mul(constant(c), pow_node(n->a, constant(c - 1.0))), diff(n->a, var));
    }
    case Op::Neg: return neg(diff(n->a, var));
    case Op::Sin: return mul(make(Op::Cos, n->a), diff(n->a, var));
    case Op::Cos: return neg(mul(make(Op::Sin, n->a), diff(n->a, var)));
    case Op::Sinh: return mul(make(Op::Cosh, n->a), diff(n->a, var));
    case Op::Cosh: return mul(make(Op::Sinh, n->a), diff(n->a, var));
  }
  return nullptr;
}

void print_node(const Node& n, std::ostringstream& os, const std::vector<std::string>& vars) {
  auto bin = [&](const char* sym) {
    os << '(';
    print_node(*n.a, os, vars);
    os << sym;
    print_node(*n.b, os, vars);
    os << ')';
  };
  switch (n.op) {
    case Op::Const: os << n.value; break;
    case Op::Var: os << vars[static_cast<size_t>(n.var)]; break;
    case Op::Add: bin("+"); break;
    case Op::Sub: bin("-"); break;
    case Op::Mul: bin("*"); break;
    case Op::Div: bin("/"); break;
    case Op::Pow: bin("^"); break;
    case Op::Neg:
      os << "(-";
      print_node(*n.a, os, vars);
      os << ')';
      break;
    case Op::Sin: os << "sin("; print_node(*n.a, os, vars); os << ')'; break;
    case Op::Cos: os << "cos("; print_node(*n.a, os, vars); os << ')'; break;
    case Op::Sinh: os << "sinh("; print_node(*n.a, os, vars); os << ')'; break;
    case Op::Cosh: os << "cosh("; print_node(*n.a, os, vars); os << ')'; break;
  }
}

}  // namespace

Expression::Expression(NodePtr root, std::vector<std::string> vars)
    : root_(std::move(root)), vars_(std::move(vars)) {}

Expression Expression::parse(const std::string& text, std::vector<std::string> variables) {
  Parser p(text, variables);
  NodePtr root = p.run();  // before the move below
  return Expression(std::move(root), std::move(variables));
}

double Expression::operator()(double x0, double x1) const {
  return eval_node(*root_, x0, x1);
}

Expression Expression::derivative(const std::string& variable) const {
  int var = -1;
  for (size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i] == variable) var = static_cast<int>(i);
  if (var < 0) throw ValidationError("derivative variable '" + variable + "' was not declared");
  return Expression(diff(root_, var), vars_);
}

std::string Expression::text() const {
  std::ostringstream os;
  print_node(*root_, os, vars_);
  return os.str();
}

}  // namespace tcurve
