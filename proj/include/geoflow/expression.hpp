#pragma once

#include <memory>
#include <string>
#include <vector>

#include "geoflow/chart_geometry.hpp"
#include "geoflow/errors.hpp"
#include "geoflow/integrator.hpp"

namespace geoflow {

namespace detail { struct ExprNode; }

// Arithmetic expression over named variables with symbolic first derivatives.
// Grammar: + - * / ^ (constant exponents), unary minus, sin, cos, exp,
// numeric literals, parentheses.
class Expression {
 public:
  // vars[i] is the identifier bound to point[i].
  static Expression parse(const std::string& text, const std::vector<std::string>& vars);

  double eval(const Vec& point) const;
  Expression derivative(int var) const;
  int arity() const { return arity_; }

 private:
  Expression(std::shared_ptr<const detail::ExprNode> root, int arity)
      : root_(std::move(root)), arity_(arity) {}
  std::shared_ptr<const detail::ExprNode> root_;
  int arity_ = 0;
};

// Bundles an expression with all first partials as metric-entry callables.
AnalyticScalar analytic_scalar_from_expression(const Expression& e);

// Convenience: parse in the adapted-coordinate variable set (u, v, x1..xn).
Expression parse_kundt_entry(const std::string& text, int transverse_dim);

}  // namespace geoflow
