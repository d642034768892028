#include "geoflow/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace geoflow {
namespace detail {

enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp };

struct ExprNode {
  Op op;
  double value = 0.0;  // Const
  int var = -1;        // Var
  std::shared_ptr<const ExprNode> a, b;
};

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr constant(double v) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Const;
  n->value = v;
  return n;
}

bool is_const(const NodePtr& n, double v) { return n->op == Op::Const && n->value == v; }

NodePtr make(Op op, NodePtr a, NodePtr b = nullptr) {
  // Constant folding and identity pruning keep derivative trees small.
  if (a && a->op == Op::Const && (!b || b->op == Op::Const)) {
    const double x = a->value, y = b ? b->value : 0.0;
    switch (op) {
      case Op::Add: return constant(x + y);
      case Op::Sub: return constant(x - y);
      case Op::Mul: return constant(x * y);
      case Op::Div: return constant(x / y);
      case Op::Pow: return constant(std::pow(x, y));
      case Op::Neg: return constant(-x);
      case Op::Sin: return constant(std::sin(x));
      case Op::Cos: return constant(std::cos(x));
      case Op::Exp: return constant(std::exp(x));
      default: break;
    }
  }
  switch (op) {
    case Op::Add:
      if (is_const(a, 0.0)) return b;
      if (is_const(b, 0.0)) return a;
      break;
    case Op::Sub:
      if (is_const(b, 0.0)) return a;
      break;
    case Op::Mul:
      if (is_const(a, 0.0) || is_const(b, 0.0)) return constant(0.0);
      if (is_const(a, 1.0)) return b;
      if (is_const(b, 1.0)) return a;
      break;
    case Op::Div:
      if (is_const(a, 0.0)) return constant(0.0);
      if (is_const(b, 1.0)) return a;
      break;
    case Op::Pow:
      if (is_const(b, 1.0)) return a;
      if (is_const(b, 0.0)) return constant(1.0);
      break;
    default: break;
  }
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

double eval_node(const ExprNode& n, const Vec& p) {
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var: return p[n.var];
    case Op::Add: return eval_node(*n.a, p) + eval_node(*n.b, p);
    case Op::Sub: return eval_node(*n.a, p) - eval_node(*n.b, p);
    case Op::Mul: return eval_node(*n.a, p) * eval_node(*n.b, p);
    case Op::Div: return eval_node(*n.a, p) / eval_node(*n.b, p);
    case Op::Pow: return std::pow(eval_node(*n.a, p), eval_node(*n.b, p));
    case Op::Neg: return -eval_node(*n.a, p);
    case Op::Sin: return std::sin(eval_node(*n.a, p));
    case Op::Cos: return std::cos(eval_node(*n.a, p));
    case Op::Exp: return std::exp(eval_node(*n.a, p));
  }
  return 0.0;
}

NodePtr diff_node(const NodePtr& n, int var) {
  switch (n->op) {
    case Op::Const: return constant(0.0);
    case Op::Var: return constant(n->var == var ? 1.0 : 0.0);
    case Op::Add: return make(Op::Add, diff_node(n->a, var), diff_node(n->b, var));
    case Op::Sub: return make(Op::Sub, diff_node(n->a, var), diff_node(n->b, var));
    case Op::Mul:
      return make(Op::Add, make(Op::Mul, diff_node(n->a, var), n->b),
                  make(Op::Mul, n->a, diff_node(n->b, var)));
    case Op::Div:
      // (a/b)' = a'/b - a b'/b^2
      return make(Op::Sub, make(Op::Div, diff_node(n->a, var), n->b),
                  make(Op::Div, make(Op::Mul, n->a, diff_node(n->b, var)),
                       make(Op::Mul, n->b, n->b)));
    case Op::Pow: {
      if (n->b->op != Op::Const)
        throw input_error("expression: only constant exponents are differentiable");
      const double c = n->b->value;
      return make(Op::Mul, constant(c),
                  make(Op::Mul, make(Op::Pow, n->a, constant(c - 1.0)), diff_node(n->a, var)));
    }
    case Op::Neg: return make(Op::Neg, diff_node(n->a, var));
    case Op::Sin: return make(Op::Mul, make(Op::Cos, n->a), diff_node(n->a, var));
    case Op::Cos:
      return make(Op::Neg, make(Op::Mul, make(Op::Sin, n->a), diff_node(n->a, var)));
    case Op::Exp: return make(Op::Mul, make(Op::Exp, n->a), diff_node(n->a, var));
  }
  return constant(0.0);
}

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& vars)
      : text_(text), vars_(vars) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != text_.size())
      throw input_error("expression: unexpected trailing input at '" +
                        text_.substr(pos_) + "'");
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) { ++pos_; return true; }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr expr() {
    NodePtr e = term();
    while (true) {
      if (consume('+')) e = make(Op::Add, e, term());
      else if (consume('-')) e = make(Op::Sub, e, term());
      else return e;
    }
  }

  NodePtr term() {
    NodePtr e = factor();
    while (true) {
      if (consume('*')) e = make(Op::Mul, e, factor());
      else if (consume('/')) e = make(Op::Div, e, factor());
      else return e;
    }
  }

  NodePtr factor() {
    if (consume('-')) return make(Op::Neg, factor());  // -x^2 is -(x^2)
    NodePtr base = primary();
    if (consume('^')) return make(Op::Pow, base, factor());  // right-associative
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw input_error("expression: unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    if (consume('(')) {
      NodePtr e = expr();
      if (!consume(')')) throw input_error("expression: missing ')'");
      return e;
    }
    throw input_error(std::string("expression: unexpected character '") + c + "'");
  }

  NodePtr number() {
    const char* start = text_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(start, &end);
    if (end == start) throw input_error("expression: bad numeric literal");
    pos_ += std::size_t(end - start);
    return constant(v);
  }

  NodePtr identifier() {
    std::size_t begin = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name = text_.substr(begin, pos_ - begin);
    if (name == "sin" || name == "cos" || name == "exp") {
      if (!consume('(')) throw input_error("expression: " + name + " needs parentheses");
      NodePtr arg = expr();
      if (!consume(')')) throw input_error("expression: missing ')'");
      if (name == "sin") return make(Op::Sin, arg);
      if (name == "cos") return make(Op::Cos, arg);
      return make(Op::Exp, arg);
    }
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) {
        auto n = std::make_shared<ExprNode>();
        n->op = Op::Var;
        n->var = int(i);
        return n;
      }
    throw input_error("expression: unknown identifier '" + name + "'");
  }

  const std::string& text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace detail

Expression Expression::parse(const std::string& text, const std::vector<std::string>& vars) {
  detail::Parser p(text, vars);
  return Expression(p.run(), int(vars.size()));
}

double Expression::eval(const Vec& point) const {
  if (point.size() != arity_) throw input_error("expression: point has wrong dimension");
  return detail::eval_node(*root_, point);
}

Expression Expression::derivative(int var) const {
  if (var < 0 || var >= arity_) throw input_error("expression: derivative index out of range");
  return Expression(detail::diff_node(root_, var), arity_);
}

AnalyticScalar analytic_scalar_from_expression(const Expression& e) {
  std::vector<Expression> partials;
  partials.reserve(std::size_t(e.arity()));
  for (int i = 0; i < e.arity(); ++i) partials.push_back(e.derivative(i));
  AnalyticScalar s;
  s.value = [e](const Vec& p) { return e.eval(p); };
  s.grad = [partials](const Vec& p) {
    Vec g(Eigen::Index(partials.size()));
    for (std::size_t i = 0; i < partials.size(); ++i) g[Eigen::Index(i)] = partials[i].eval(p);
    return g;
  };
  return s;
}

Expression parse_kundt_entry(const std::string& text, int transverse_dim) {
  std::vector<std::string> vars = {"u", "v"};
  for (int i = 1; i <= transverse_dim; ++i) vars.push_back("x" + std::to_string(i));
  return Expression::parse(text, vars);
}

}  // namespace geoflow
