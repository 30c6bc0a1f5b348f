#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hardy/exact.hpp"
#include "hardy/special.hpp"

using namespace hardy;

TEST_SUITE("exact") {
  TEST_CASE("exact A") {
    CHECK(exact_A(2, 2) == doctest::Approx(2 / std::numbers::pi).epsilon(1e-13));
    for (double p : {1.5, 2.0, 3.0, 5.0, 10.0}) {
      const double diag = p * std::sin(std::numbers::pi / p) / (std::numbers::pi * std::pow(p - 1, 1 / p));
      CHECK(exact_A(p, p) == doctest::Approx(diag).epsilon(1e-12));
    }
    // 30-digit Beta evaluation.
    CHECK(exact_A(2, 4) == doctest::Approx(0.709827942242356).epsilon(1e-12));
  }

  TEST_CASE("closed-form estimates") {
    CHECK(prop_B(2, 2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(prop_B(2, 4) == doctest::Approx(0.620403239401400).epsilon(1e-13));
    CHECK(prop_delta1_bar(2, 2) == doctest::Approx(std::sqrt(6.0) / 4).epsilon(1e-14));
    CHECK(prop_A_star(2, 2) == doctest::Approx(2 / std::numbers::pi).epsilon(1e-14));
    for (double p : {1.5, 2.0, 3.0, 5.0}) CHECK(prop_A_star(p, p) == doctest::Approx(exact_A(p, p)).epsilon(1e-12));
    for (double p : {1.3, 2.0, 4.0})
      for (double q : {1.5, 3.0, 9.0}) {
        const double ps = p / (p - 1);
        CHECK(prop_B(p, q) ==
              doctest::Approx(std::pow(q / (q + ps), 1 / ps) * std::pow(ps / (q + ps), 1 / q)).epsilon(1e-12));
        CHECK(prop_delta1_bar(p, q) >= prop_B(p, q));
      }
  }

  TEST_CASE("delta1 readings") {
    // 1-D maximizations with mpmath at 30 digits.
    CHECK(prop_delta1(2, 2, Delta1Reading::A) == doctest::Approx(0.721485828296126).epsilon(1e-9));
    CHECK(prop_delta1(2, 2, Delta1Reading::B) == doctest::Approx(0.653830243005916).epsilon(1e-9));
    CHECK(parse_reading("a") == Delta1Reading::A);
    CHECK_THROWS(parse_reading("C"));
  }

  TEST_CASE("chain at (2,2)") {
    const ImprovementChain c = improvement_chain(2, 2);
    CHECK(c.B == doctest::Approx(0.5));
    CHECK(c.delta1_bar == doctest::Approx(0.612372435696));
    CHECK(c.A_exact == doctest::Approx(0.636619772368));
    CHECK(c.A_star == doctest::Approx(c.A_exact).epsilon(1e-14));
    CHECK(c.kB == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c.ordered());
    CHECK_THROWS(improvement_chain(3, 2));
  }

  TEST_CASE("chain on the sweep ranges") {
    for (double p = 1.05; p <= 30.0; p += 0.95) CHECK(improvement_chain(p, p).ordered());
    for (double p : {2.0, 5.0})
      for (double r = 0.01; r <= 15.0; r += 0.37) {
        const ImprovementChain c = improvement_chain(p, p + r);
        CAPTURE(p);
        CAPTURE(r);
        CHECK(c.ordered());
        CHECK(c.A_star >= c.A_exact);
      }
  }

  TEST_CASE("violations are named") {
    ImprovementChain c = improvement_chain(2, 4);
    c.kB *= 0.9;
    const auto v = chain_violations(c);
    REQUIRE(v.size() == 1);
    CHECK(v.front() == "delta1 <= kB");
  }
}
