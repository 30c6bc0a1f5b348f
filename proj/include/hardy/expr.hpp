#pragma once

// One-variable arithmetic expressions used for densities and elliptic
// coefficients given on the command line.
//
// Grammar (lowest to highest precedence):
//
//   expr    := term   { ('+' | '-') term }
//   term    := unary  { ('*' | '/') unary }
//   unary   := '-' unary | power
//   power   := primary [ '^' unary ]          (right associative)
//   primary := number | 'x' | name '(' expr { ',' expr } ')' | '(' expr ')'
//
// Functions: exp log sin cos sqrt abs (one argument), pow (two arguments).

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hardy {

class Expression {
 public:
  enum class Kind { literal, variable, add, subtract, multiply, divide, power, negate, call };
  enum class Function { exp, log, sin, cos, sqrt, abs, pow };

  static Expression literal(double value);
  static Expression variable();
  static Expression binary(Kind kind, Expression lhs, Expression rhs);
  static Expression negate(Expression operand);
  static Expression call(Function function, std::vector<Expression> args);

  Kind kind() const noexcept;
  /// Literal value; only meaningful for Kind::literal.
  double value() const noexcept;
  /// Called function; only meaningful for Kind::call.
  Function function() const noexcept;
  std::span<const Expression> children() const noexcept;

  /// Evaluates at `x`. Throws DomainError instead of producing NaN.
  double operator()(double x) const;

  /// Fully parenthesised text that parses back to the same tree. Parsed trees
  /// only hold nonnegative literals; a negative literal prints as a negation.
  std::string to_string() const;

  /// Structural equality.
  friend bool operator==(const Expression& a, const Expression& b);

 private:
  struct Node;
  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Parses `text`. Throws ParseError with the byte offset of the first problem.
Expression parse(std::string_view text);

inline double evaluate(const Expression& e, double x) { return e(x); }
inline std::string to_string(const Expression& e) { return e.to_string(); }

std::string_view function_name(Expression::Function f) noexcept;

}  // namespace hardy
