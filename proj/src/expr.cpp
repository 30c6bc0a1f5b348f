#include "hardy/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <utility>

#include "hardy/errors.hpp"

namespace hardy {

struct Expression::Node {
  Kind kind;
  double value = 0.0;
  Function function = Function::exp;
  std::vector<Expression> children;
};

namespace {

constexpr std::array<std::pair<std::string_view, Expression::Function>, 7> kFunctions{{
    {"exp", Expression::Function::exp},
    {"log", Expression::Function::log},
    {"sin", Expression::Function::sin},
    {"cos", Expression::Function::cos},
    {"sqrt", Expression::Function::sqrt},
    {"abs", Expression::Function::abs},
    {"pow", Expression::Function::pow},
}};

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

double checked_pow(double base, double exponent, const Expression& at, double x) {
  if (base == 0.0 && exponent < 0.0) throw DomainError("zero raised to a negative power", at.to_string(), x);
  if (base < 0.0 && std::isfinite(exponent) && exponent != std::nearbyint(exponent))
    throw DomainError("negative base with non-integer exponent", at.to_string(), x);
  return std::pow(base, exponent);
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expression parse_all() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("empty expression", 0);
    Expression e = parse_expr();
    skip_space();
    if (pos_ != text_.size()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return e;
  }

 private:
  Expression parse_expr() {
    Expression lhs = parse_term();
    for (;;) {
      skip_space();
      if (accept('+')) {
        lhs = Expression::binary(Expression::Kind::add, std::move(lhs), parse_term());
      } else if (accept('-')) {
        lhs = Expression::binary(Expression::Kind::subtract, std::move(lhs), parse_term());
      } else {
        return lhs;
      }
    }
  }

  Expression parse_term() {
    Expression lhs = parse_unary();
    for (;;) {
      skip_space();
      if (accept('*')) {
        lhs = Expression::binary(Expression::Kind::multiply, std::move(lhs), parse_unary());
      } else if (accept('/')) {
        lhs = Expression::binary(Expression::Kind::divide, std::move(lhs), parse_unary());
      } else {
        return lhs;
      }
    }
  }

  Expression parse_unary() {
    skip_space();
    if (accept('-')) return Expression::negate(parse_unary());
    return parse_power();
  }

  Expression parse_power() {
    Expression base = parse_primary();
    skip_space();
    if (accept('^')) return Expression::binary(Expression::Kind::power, std::move(base), parse_unary());
    return base;
  }

  Expression parse_primary() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expression inner = parse_expr();
      expect(')');
      return inner;
    }
    if (is_digit(c) || c == '.') return parse_number();
    if (is_alpha(c)) return parse_identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  Expression parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (is_digit(text_[pos_]) || text_[pos_] == '.')) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && is_digit(text_[p])) {
        pos_ = p;
        while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
      }
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) throw ParseError("malformed number", start);
    return Expression::literal(value);
  }

  Expression parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (is_alpha(text_[pos_]) || is_digit(text_[pos_]) || text_[pos_] == '_')) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") return Expression::variable();

    for (const auto& [fname, f] : kFunctions) {
      if (fname != name) continue;
      skip_space();
      if (!accept('(')) throw ParseError("expected '(' after function '" + std::string(name) + "'", pos_);
      std::vector<Expression> args;
      args.push_back(parse_expr());
      skip_space();
      while (accept(',')) {
        args.push_back(parse_expr());
        skip_space();
      }
      const std::size_t arity = f == Expression::Function::pow ? 2 : 1;
      if (args.size() != arity)
        throw ParseError("function '" + std::string(name) + "' expects " + std::to_string(arity) + " argument(s)",
                         start);
      expect(')');
      return Expression::call(f, std::move(args));
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip_space();
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::literal(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::literal;
  n->value = value;
  return Expression(std::move(n));
}

Expression Expression::variable() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::variable;
  return Expression(std::move(n));
}

Expression Expression::binary(Kind kind, Expression lhs, Expression rhs) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->children = {std::move(lhs), std::move(rhs)};
  return Expression(std::move(n));
}

Expression Expression::negate(Expression operand) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::negate;
  n->children = {std::move(operand)};
  return Expression(std::move(n));
}

Expression Expression::call(Function function, std::vector<Expression> args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::call;
  n->function = function;
  n->children = std::move(args);
  return Expression(std::move(n));
}

Expression::Kind Expression::kind() const noexcept { return node_->kind; }
double Expression::value() const noexcept { return node_->value; }
Expression::Function Expression::function() const noexcept { return node_->function; }
std::span<const Expression> Expression::children() const noexcept { return node_->children; }

double Expression::operator()(double x) const {
  const Node& n = *node_;
  double result = 0.0;
  switch (n.kind) {
    case Kind::literal:
      return n.value;
    case Kind::variable:
      return x;
    case Kind::negate:
      return -n.children[0](x);
    case Kind::add:
      result = n.children[0](x) + n.children[1](x);
      break;
    case Kind::subtract:
      result = n.children[0](x) - n.children[1](x);
      break;
    case Kind::multiply:
      result = n.children[0](x) * n.children[1](x);
      break;
    case Kind::divide: {
      const double num = n.children[0](x);
      const double den = n.children[1](x);
      if (den == 0.0) throw DomainError("division by zero", to_string(), x);
      result = num / den;
      break;
    }
    case Kind::power:
      result = checked_pow(n.children[0](x), n.children[1](x), *this, x);
      break;
    case Kind::call: {
      const double a = n.children[0](x);
      switch (n.function) {
        case Function::exp:
          result = std::exp(a);
          break;
        case Function::log:
          if (a <= 0.0) throw DomainError("log of a nonpositive number", to_string(), x);
          result = std::log(a);
          break;
        case Function::sin:
          result = std::sin(a);
          break;
        case Function::cos:
          result = std::cos(a);
          break;
        case Function::sqrt:
          if (a < 0.0) throw DomainError("sqrt of a negative number", to_string(), x);
          result = std::sqrt(a);
          break;
        case Function::abs:
          result = std::fabs(a);
          break;
        case Function::pow:
          result = checked_pow(a, n.children[1](x), *this, x);
          break;
      }
      break;
    }
  }
  if (std::isnan(result)) throw DomainError("undefined result", to_string(), x);
  return result;
}

std::string Expression::to_string() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::literal:
      return n.value < 0.0 ? "(-" + format_double(-n.value) + ")" : format_double(n.value);
    case Kind::variable:
      return "x";
    case Kind::negate:
      return "(-" + n.children[0].to_string() + ")";
    case Kind::call: {
      std::string s(function_name(n.function));
      s += '(';
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) s += ", ";
        s += n.children[i].to_string();
      }
      return s + ')';
    }
    default:
      break;
  }
  const char* op = " + ";
  switch (n.kind) {
    case Kind::subtract: op = " - "; break;
    case Kind::multiply: op = " * "; break;
    case Kind::divide: op = " / "; break;
    case Kind::power: op = "^"; break;
    default: break;
  }
  return "(" + n.children[0].to_string() + op + n.children[1].to_string() + ")";
}

bool operator==(const Expression& a, const Expression& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  if (a.kind() == Expression::Kind::literal) return a.value() == b.value();
  if (a.kind() == Expression::Kind::call && a.function() != b.function()) return false;
  const auto ca = a.children();
  const auto cb = b.children();
  if (ca.size() != cb.size()) return false;
  for (std::size_t i = 0; i < ca.size(); ++i)
    if (!(ca[i] == cb[i])) return false;
  return true;
}

Expression parse(std::string_view text) { return Parser(text).parse_all(); }

std::string_view function_name(Expression::Function f) noexcept {
  for (const auto& [name, fn] : kFunctions)
    if (fn == f) return name;
  return "?";
}

}  // namespace hardy
