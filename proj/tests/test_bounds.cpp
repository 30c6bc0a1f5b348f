#include <doctest.h>

#include <cmath>
#include <limits>

#include "hardy/bounds.hpp"
#include "hardy/catalog.hpp"
#include "hardy/exact.hpp"

using namespace hardy;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

HardySetup lebesgue_setup(double p, double q, Boundary b) {
  const WeightedMeasure m = lebesgue(Interval(0.0, 1.0));
  return HardySetup(m, m, Exponents(p, q), b);
}

}  // namespace

TEST_SUITE("bounds") {
  TEST_CASE("B+ and B- on Lebesgue, p = q = 2") {
    const HardySetup s = lebesgue_setup(2, 2, Boundary::ergodic);
    const PointOptimum plus = b_plus(s);
    CHECK(plus.value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(plus.x == doctest::Approx(0.5).epsilon(1e-6));
    const PointOptimum minus = b_minus(s);
    CHECK(minus.value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(minus.x == doctest::Approx(0.5).epsilon(1e-6));
  }

  TEST_CASE("B+ matches the stationarity closed form") {
    for (double p : {1.2, 1.5, 2.0, 3.0, 7.0}) {
      for (double q : {1.3, 2.0, 4.0, 11.0}) {
        const double ps = p / (p - 1);
        const double y = q / (q + ps);
        const double expected = std::pow(y, 1 / ps) * std::pow(ps / (q + ps), 1 / q);
        const PointOptimum r = b_plus(lebesgue_setup(p, q, Boundary::dirichlet_left));
        CAPTURE(p);
        CAPTURE(q);
        CHECK(r.value == doctest::Approx(expected).epsilon(1e-10));
        CHECK(r.value == doctest::Approx(prop_B(p, q)).epsilon(1e-10));
        CHECK(r.x == doctest::Approx(y).epsilon(1e-5));
      }
    }
  }

  TEST_CASE("argmax stays where mu has mass") {
    const Interval iv(0.0, 1.0);
    const WeightedMeasure mu = expression_measure(iv, parse("abs(0.5 - x) + 0.5 - x"));
    const HardySetup s(mu, lebesgue(iv), Exponents(2, 2), Boundary::dirichlet_left);
    const PointOptimum r = b_plus(s);
    CHECK(r.value > 0.0);
    CHECK(r.x <= 0.5);
  }

  TEST_CASE("B- is B+ of the reflected setup") {
    const CatalogEntry entry = setup_catalog()[1];
    const HardySetup s = entry.make(1.7, 3.0, Boundary::ergodic);
    CHECK(b_minus(s).value == b_plus(reflect(s)).value);
  }

  TEST_CASE("Gaussian on the left half-line") {
    const Interval iv(-kInf, 0.0);
    const WeightedMeasure g = gaussian(iv);
    const HardySetup s(g, g, Exponents(2, 2), Boundary::dirichlet_right);
    const PointOptimum r = b_minus(s);
    // 30-digit maximization of erfi/erfc closed forms.
    CHECK(r.value == doctest::Approx(0.691963073463985).epsilon(1e-8));
    CHECK(r.x == doctest::Approx(-0.899392372906889).epsilon(1e-5));
  }

  TEST_CASE("infinite dual mass makes B+ infinite") {
    const Interval iv(0.0, 1.0);
    const HardySetup s(lebesgue(iv), power_weight(iv, 1.0), Exponents(2, 2), Boundary::dirichlet_left);
    CHECK(std::isinf(b_plus(s).value));
  }

  TEST_CASE("B*, B_* and kappa on Lebesgue") {
    const HardySetup s = lebesgue_setup(2, 2, Boundary::ergodic);
    const PairOptimum star = b_star(s);
    CHECK(star.value == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(star.x == doctest::Approx(0.25).epsilon(1e-5));
    CHECK(star.y == doctest::Approx(0.75).epsilon(1e-5));
    CHECK(b_substar(s).value == star.value);
    CHECK(kappa(s).value == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(kappa0(s.with_boundary(Boundary::dirichlet_both)).value == doctest::Approx(0.25).epsilon(1e-10));
    const HardySetup d = lebesgue_setup(3, 3, Boundary::ergodic);
    CHECK(b_star(d).value == b_substar(d).value);
  }

  TEST_CASE("B_* <= B* <= 2^{1/p-1/q} B_*") {
    for (const CatalogEntry& entry : finite_mass_catalog()) {
      for (double p : {1.2, 2.0}) {
        for (double q : {2.0, 6.0}) {
          const HardySetup s = entry.make(p, q, Boundary::ergodic);
          const double star = b_star(s).value, sub = b_substar(s).value;
          CAPTURE(entry.name);
          CAPTURE(p);
          CAPTURE(q);
          CHECK(sub <= star + 1e-9);
          CHECK(star <= std::pow(2.0, 1 / p - 1 / q) * sub + 1e-9);
        }
      }
    }
  }

  TEST_CASE("kappa invariances") {
    const Interval iv(0.0, 1.0);
    const WeightedMeasure m = lebesgue(iv);
    const HardySetup s(m, m, Exponents(2, 2), Boundary::ergodic);
    const double k = kappa(s).value;
    const HardySetup scaled(m.scaled(4.0), m, Exponents(2, 2), Boundary::ergodic);
    CHECK(kappa(scaled).value == doctest::Approx(2.0 * k).epsilon(1e-10));
    const MeasureTriple t = measures_from_elliptic({parse("1"), parse("0"), 0.5}, iv);
    const HardySetup e(t.mu, t.nu, t.nu_hat, Exponents(2, 2), Boundary::ergodic);
    CHECK(std::fabs(kappa(e).value - k) <= 1e-10);
  }

  TEST_CASE("kappa0 is kappa of the exchanged pair") {
    for (const CatalogEntry& entry : setup_catalog()) {
      for (Boundary b : entry.boundaries) {
        if (b != Boundary::dirichlet_both) continue;
        const HardySetup s = entry.make(2, 2, b);
        CAPTURE(entry.name);
        CHECK(kappa0(s).value == kappa(swapped(s)).value);
      }
    }
  }

  TEST_CASE("split bounds") {
    const HardySetup s = lebesgue_setup(2, 2, Boundary::ergodic);
    const SplitBounds half = split_bounds(s, 0.5);
    CHECK(half.minus.value == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(half.minus.x == doctest::Approx(0.25).epsilon(1e-5));
    CHECK(half.plus.value == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(split_bounds(s, 1e-9).minus.value < 1e-4);
    CHECK(balanced_split(s).theta == doctest::Approx(0.5).epsilon(1e-8));
    for (const CatalogEntry& entry : finite_mass_catalog()) {
      const HardySetup t = entry.make(1.5, 3.0, Boundary::ergodic);
      const double star = b_star(t).value;
      const SplitBounds bal = balanced_split(t);
      CAPTURE(entry.name);
      CHECK(std::min(bal.minus.value, bal.plus.value) <= star * (1 + 1e-9));
    }
  }

  TEST_CASE("two-sided reports") {
    SUBCASE("ergodic") {
      const BoundsReport r = two_sided(lebesgue_setup(2, 2, Boundary::ergodic));
      CHECK(*r.lower_A == doctest::Approx(0.25).epsilon(1e-10));
      CHECK(*r.upper_A == doctest::Approx(0.5).epsilon(1e-10));
    }
    SUBCASE("dirichlet left") {
      const BoundsReport r = two_sided(lebesgue_setup(2, 2, Boundary::dirichlet_left));
      CHECK(*r.lower_A == doctest::Approx(0.5).epsilon(1e-10));
      CHECK(*r.upper_A == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("dirichlet left, q = 4") {
      const BoundsReport r = two_sided(lebesgue_setup(2, 4, Boundary::dirichlet_left));
      CHECK(*r.lower_A == doctest::Approx(prop_B(2, 4)).epsilon(1e-10));
      CHECK(*r.upper_A == doctest::Approx(1.3160740129524924 * prop_B(2, 4)).epsilon(1e-10));
      CHECK(*r.lower_A <= exact_A(2, 4));
      CHECK(exact_A(2, 4) <= *r.upper_A);
    }
    SUBCASE("dirichlet both") {
      const BoundsReport r = two_sided(lebesgue_setup(2, 2, Boundary::dirichlet_both));
      CHECK(*r.lower_A == doctest::Approx(0.25).epsilon(1e-10));
      CHECK(*r.upper_A == doctest::Approx(0.5).epsilon(1e-10));
    }
    SUBCASE("q < p has no Dirichlet upper bound") {
      const BoundsReport r = two_sided(lebesgue_setup(3, 2, Boundary::dirichlet_left));
      CHECK(r.lower_A.has_value());
      CHECK_FALSE(r.upper_A.has_value());
      CHECK_FALSE(r.upper_source.empty());
    }
  }

  TEST_CASE("ergodic setups need finite mu") {
    const WeightedMeasure m = lebesgue(Interval(0.0, kInf));
    CHECK_THROWS(HardySetup(m, m, Exponents(2, 2), Boundary::ergodic));
  }
}
