#pragma once

#include <memory>
#include <string>
#include <vector>

namespace tcurve {

// Small arithmetic grammar for user-defined metric coefficients and chart curves:
// +, -, *, /, ^, sin, cos, sinh, cosh, the constant pi, and named variables.
// Expressions are closed under symbolic differentiation, which is what lets a
// custom chart expose exact g_r, g_phi, g_rr fields.
class Expression {
 public:
  Expression() = default;

  /// Parse `text` over the given variable names (at most two are used here).
  static Expression parse(const std::string& text, std::vector<std::string> variables);

  double operator()(double x0, double x1 = 0.0) const;

  /// Exact derivative w.r.t. one of the declared variables.
  /// Throws ValidationError for `f^g` with non-constant exponent.
  Expression derivative(const std::string& variable) const;

  bool valid() const { return root_ != nullptr; }
  std::string text() const;

  struct Node;  // definition lives in the implementation file

 private:
  using NodePtr = std::shared_ptr<const Node>;
  Expression(NodePtr root, std::vector<std::string> vars);

  NodePtr root_;
  std::vector<std::string> vars_;
};

}  // namespace tcurve
