#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "hardy/errors.hpp"
#include "hardy/measure.hpp"

using namespace hardy;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_SUITE("measure") {
  TEST_CASE("Lebesgue masses") {
    const WeightedMeasure m = lebesgue(Interval(0.0, 1.0));
    CHECK(m.cumulative(0.0, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(m.cumulative(0.3, 0.3) == 0.0);
    CHECK(m.total_mass() == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("density x on (0,1) has mass 1/2") {
    const WeightedMeasure m = expression_measure(Interval(0.0, 1.0), parse("x"));
    CHECK(m.total_mass() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m.cumulative(0.2, 0.7) == doctest::Approx((0.49 - 0.04) / 2).epsilon(1e-12));
  }

  TEST_CASE("additivity over random splits") {
    const WeightedMeasure g = gaussian(Interval(-kInf, kInf));
    const double pts[] = {-kInf, -3.1, -0.4, 0.0, 0.77, 2.5, kInf};
    for (int i = 0; i + 2 < 7; ++i) {
      const double whole = g.cumulative(pts[i], pts[i + 2]);
      const double parts = g.cumulative(pts[i], pts[i + 1]) + g.cumulative(pts[i + 1], pts[i + 2]);
      CHECK(parts == doctest::Approx(whole).epsilon(1e-11));
    }
    CHECK(g.total_mass() == doctest::Approx(std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-11));
  }

  TEST_CASE("divergent mass is flagged as infinite") {
    const WeightedMeasure nu = expression_measure(Interval(0.0, 1.0), parse("x^2"));
    const WeightedMeasure nh = dual_measure(nu, 3.0);
    CHECK(nh.density(0.5) == doctest::Approx(2.0));
    CHECK(is_divergent(nh.cumulative(0.0, 1.0)));
    CHECK(std::isfinite(nh.cumulative(0.5, 1.0)));
    CHECK(nh.cumulative(0.5, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-11));
    const WeightedMeasure leb = lebesgue(Interval(0.0, kInf));
    CHECK(is_divergent(leb.total_mass()));
  }

  TEST_CASE("dual of Lebesgue is Lebesgue") {
    const WeightedMeasure nh = dual_measure(lebesgue(Interval(0.0, 1.0)), 3.7);
    CHECK(nh.density(0.3) == doctest::Approx(1.0));
    CHECK(nh.total_mass() == doctest::Approx(1.0).epsilon(1e-13));
  }

  TEST_CASE("reflection is an involution") {
    const WeightedMeasure m = power_weight(Interval(0.0, 1.0), -0.5);
    const WeightedMeasure r = m.reflected();
    CHECK(r.interval().left == -1.0);
    CHECK(r.interval().right == 0.0);
    CHECK(r.cumulative(-0.6, -0.1) == doctest::Approx(m.cumulative(0.1, 0.6)).epsilon(1e-13));
    const WeightedMeasure rr = r.reflected();
    CHECK(rr.cumulative(0.1, 0.6) == doctest::Approx(m.cumulative(0.1, 0.6)).epsilon(1e-13));
    CHECK(m.total_mass() == doctest::Approx(2.0).epsilon(1e-11));
  }

  TEST_CASE("scaling multiplies every mass") {
    const WeightedMeasure m = gaussian(Interval(-kInf, 0.0));
    const WeightedMeasure s = m.scaled(4.0);
    CHECK(s.cumulative(-1.0, -0.2) == doctest::Approx(4.0 * m.cumulative(-1.0, -0.2)).epsilon(1e-14));
  }

  TEST_CASE("negative densities are rejected") {
    CHECK_THROWS_AS(expression_measure(Interval(0.0, 1.0), parse("x - 0.5")), DomainError);
    CHECK_THROWS_AS(Interval(1.0, 0.0), std::invalid_argument);
  }

  TEST_CASE("endpoint transforms") {
    const EndpointTransform half(Interval(0.0, kInf));
    CHECK(half.to_x(0.5) == doctest::Approx(1.0));
    CHECK(half.dx_dt(0.5) == doctest::Approx(4.0));
    const EndpointTransform line(Interval(-kInf, kInf));
    CHECK(line.to_x(0.5) == doctest::Approx(1.0));
    CHECK(line.to_t(line.to_x(-0.3)) == doctest::Approx(-0.3));
    const EndpointTransform id(Interval(0.0, 1.0));
    CHECK(id.kind() == EndpointTransform::Kind::identity);
    CHECK(id.to_x(0.25) == 0.25);
  }

  TEST_CASE("elliptic construction") {
    SUBCASE("a = 1, b = 0 gives Lebesgue") {
      const MeasureTriple t = measures_from_elliptic({parse("1"), parse("0"), 0.0}, Interval(0.0, 1.0));
      CHECK(t.mu.density(0.4) == 1.0);
      CHECK(t.nu.density(0.4) == 1.0);
      CHECK(t.nu_hat.density(0.4) == 1.0);
    }
    SUBCASE("Ornstein-Uhlenbeck weights") {
      const MeasureTriple t = measures_from_elliptic({parse("1"), parse("-x"), 0.0}, Interval(-kInf, kInf));
      for (double x : {-2.0, -0.5, 0.3, 1.7}) {
        CHECK(t.mu.density(x) == doctest::Approx(std::exp(-x * x / 2)).epsilon(1e-10));
        CHECK(t.nu_hat.density(x) == doctest::Approx(std::exp(x * x / 2)).epsilon(1e-10));
      }
    }
    SUBCASE("moving the reference point rescales by constants") {
      const Interval iv(-kInf, kInf);
      const MeasureTriple t0 = measures_from_elliptic({parse("1"), parse("-x"), 0.0}, iv);
      const MeasureTriple t1 = measures_from_elliptic({parse("1"), parse("-x"), 1.0}, iv);
      const double c1 = -0.5;  // C_0(1)
      for (double x : {-1.0, 0.4, 2.0}) {
        CHECK(t1.mu.density(x) == doctest::Approx(t0.mu.density(x) * std::exp(-c1)).epsilon(1e-10));
        CHECK(t1.nu_hat.density(x) == doctest::Approx(t0.nu_hat.density(x) * std::exp(c1)).epsilon(1e-10));
      }
    }
    SUBCASE("reference point outside the interval") {
      CHECK_THROWS(measures_from_elliptic({parse("1"), parse("0"), 1.5}, Interval(0.0, 1.0)));
    }
    SUBCASE("a must be positive") {
      CHECK_THROWS(measures_from_elliptic({parse("x - 0.5"), parse("0"), 0.75}, Interval(0.0, 1.0)));
    }
  }

  TEST_CASE("catalog names") {
    const Interval iv(0.0, 1.0);
    CHECK(catalog_measure("lebesgue", iv).total_mass() == doctest::Approx(1.0));
    CHECK(catalog_measure("power:1", iv).total_mass() == doctest::Approx(0.5));
    CHECK(catalog_measure("exp(x)", iv).total_mass() == doctest::Approx(std::exp(1.0) - 1.0));
  }
}
