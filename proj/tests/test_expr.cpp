#include <doctest.h>

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "hardy/errors.hpp"
#include "hardy/expr.hpp"

using hardy::Expression;
using hardy::parse;

namespace {

// Literals are unsigned in the grammar; a leading minus is always negation.
Expression random_tree(std::mt19937_64& gen, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 7 : 1);
  switch (pick(gen)) {
    case 0: return Expression::literal(std::uniform_real_distribution<double>(0.0, 5.0)(gen));
    case 1: return Expression::variable();
    case 2: return Expression::binary(Expression::Kind::add, random_tree(gen, depth - 1), random_tree(gen, depth - 1));
    case 3:
      return Expression::binary(Expression::Kind::subtract, random_tree(gen, depth - 1), random_tree(gen, depth - 1));
    case 4:
      return Expression::binary(Expression::Kind::multiply, random_tree(gen, depth - 1), random_tree(gen, depth - 1));
    case 5:
      return Expression::binary(Expression::Kind::power, random_tree(gen, depth - 1), random_tree(gen, depth - 1));
    case 6: return Expression::negate(random_tree(gen, depth - 1));
    default: {
      static const Expression::Function fns[] = {Expression::Function::exp, Expression::Function::sin,
                                                 Expression::Function::cos, Expression::Function::abs};
      return Expression::call(fns[std::uniform_int_distribution<int>(0, 3)(gen)], {random_tree(gen, depth - 1)});
    }
  }
}

}  // namespace

TEST_SUITE("expr") {
  TEST_CASE("literals, powers and functions evaluate") {
    CHECK(parse("1")(0.3) == 1.0);
    CHECK(parse("x^2")(2.0) == 4.0);
    CHECK(parse("exp(-x)")(0.0) == 1.0);
    CHECK(parse("sqrt(x)")(4.0) == 2.0);
    CHECK(parse("pow(x, 3)")(2.0) == doctest::Approx(8.0));
    CHECK(parse("abs(-x)")(-2.5) == 2.5);
  }

  TEST_CASE("domain errors instead of NaN") {
    CHECK_THROWS_AS(parse("sin(x)/x")(0.0), hardy::DomainError);
    CHECK_THROWS_AS(parse("log(x)")(0.0), hardy::DomainError);
    CHECK_THROWS_AS(parse("sqrt(x)")(-1.0), hardy::DomainError);
    CHECK_THROWS_AS(parse("x^-1")(0.0), hardy::DomainError);
  }

  TEST_CASE("parse errors report an offset") {
    for (const char* bad : {"", "2*", "(x", "x)", "foo(x)", "pow(x)", "exp(x, 2)", "1..2", "y", "2 x"}) {
      CAPTURE(bad);
      CHECK_THROWS_AS(parse(bad), hardy::ParseError);
    }
    try {
      parse("x + * 2");
      FAIL("expected a parse error");
    } catch (const hardy::ParseError& e) {
      CHECK(e.offset() == 4);
    }
  }

  TEST_CASE("precedence corpus matches explicit grouping") {
    const std::vector<std::pair<const char*, const char*>> corpus = {
        {"2*x+1", "(2*x)+1"},
        {"1+2*x", "1+(2*x)"},
        {"1-x-2", "(1-x)-2"},
        {"8/x/2", "(8/x)/2"},
        {"2*x/3", "(2*x)/3"},
        {"x/2*3", "(x/2)*3"},
        {"2^3^2", "2^(3^2)"},
        {"-x^2", "-(x^2)"},
        {"-x*2", "(-x)*2"},
        {"--x", "-(-x)"},
        {"2^-x", "2^(-x)"},
        {"2^-x^2", "2^(-(x^2))"},
        {"x^2*3", "(x^2)*3"},
        {"3*x^2", "3*(x^2)"},
        {"x+x^2", "x+(x^2)"},
        {"1-x^2", "1-(x^2)"},
        {"x^2^-1", "x^(2^(-1))"},
        {"exp(x)^2", "(exp(x))^2"},
        {"-exp(x)", "-(exp(x))"},
        {"exp(-x^2/2)", "exp((-(x^2))/2)"},
        {"1/x^2", "1/(x^2)"},
        {"x*-1", "x*(-1)"},
        {"1--x", "1-(-x)"},
        {"2*x-3*x", "(2*x)-(3*x)"},
        {"(1+x)*(1-x)", "((1+x))*((1-x))"},
        {"pow(x,2)+1", "(pow(x,2))+1"},
        {"sqrt(x)*x^3", "(sqrt(x))*(x^3)"},
        {"1+2+3*4^5", "(1+2)+(3*(4^5))"},
        {"-2^2", "-(2^2)"},
        {"x/-2^2", "x/(-(2^2))"},
    };
    REQUIRE(corpus.size() == 30);
    for (const auto& [text, grouped] : corpus) {
      CAPTURE(text);
      CHECK(parse(text) == parse(grouped));
    }
    CHECK(parse("2^3^2")(0.0) == 512.0);
    CHECK(parse("-2^2")(0.0) == -4.0);
    CHECK(parse("2*x+1")(3.0) == 7.0);
  }

  TEST_CASE("printing round-trips random trees") {
    std::mt19937_64 gen(2024);
    for (int i = 0; i < 500; ++i) {
      const Expression e = random_tree(gen, 5);
      const std::string text = e.to_string();
      CAPTURE(text);
      const Expression back = parse(text);
      CHECK(back == e);
      CHECK(back.to_string() == text);
    }
  }
}
