#include "hardy/catalog.hpp"

#include <limits>
#include <numbers>

namespace hardy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

HardySetup same_measure(WeightedMeasure m, double p, double q, Boundary b) {
  return HardySetup(m, m, Exponents(p, q), b);
}

HardySetup ou_setup(const Interval& interval, double theta, double p, double q, Boundary b) {
  const MeasureTriple t = measures_from_elliptic({parse("1"), parse("-x"), theta}, interval);
  if (p == 2.0) return HardySetup(t.mu, t.nu, t.nu_hat, Exponents(p, q), b);
  return HardySetup(t.mu, t.nu, Exponents(p, q), b);
}

CatalogEntry lebesgue_entry() {
  return {"lebesgue(0,1)",
          [](double p, double q, Boundary b) { return same_measure(lebesgue(Interval(0, 1)), p, q, b); },
          {Boundary::ergodic, Boundary::dirichlet_left, Boundary::dirichlet_right, Boundary::dirichlet_both},
          [](Boundary b) -> std::optional<double> {
            if (b == Boundary::dirichlet_left || b == Boundary::dirichlet_right) return 2.0 / std::numbers::pi;
            return 1.0 / std::numbers::pi;
          }};
}

CatalogEntry power_entry(double alpha, std::vector<Boundary> kinds) {
  return {"power:" + std::string(alpha < 0 ? "-0.5" : "1") + "(0,1)",
          [alpha](double p, double q, Boundary b) { return same_measure(power_weight(Interval(0, 1), alpha), p, q, b); },
          std::move(kinds), [](Boundary) -> std::optional<double> { return std::nullopt; }};
}

CatalogEntry gauss_line_entry() {
  return {"gauss(-inf,inf)",
          [](double p, double q, Boundary b) { return same_measure(gaussian(Interval(-kInf, kInf)), p, q, b); },
          {Boundary::ergodic}, [](Boundary) -> std::optional<double> { return 1.0; }};
}

CatalogEntry ou_line_entry() {
  return {"ou-elliptic(-inf,inf)",
          [](double p, double q, Boundary b) { return ou_setup(Interval(-kInf, kInf), 0.0, p, q, b); },
          {Boundary::ergodic}, [](Boundary) -> std::optional<double> { return 1.0; }};
}

}  // namespace

std::vector<CatalogEntry> setup_catalog() {
  return {
      lebesgue_entry(),
      power_entry(-0.5, {Boundary::ergodic, Boundary::dirichlet_left, Boundary::dirichlet_right,
                         Boundary::dirichlet_both}),
      power_entry(1.0, {Boundary::ergodic, Boundary::dirichlet_right}),
      gauss_line_entry(),
      ou_line_entry(),
      {"gauss(-inf,0)",
       [](double p, double q, Boundary b) { return same_measure(gaussian(Interval(-kInf, 0)), p, q, b); },
       {Boundary::dirichlet_right}, [](Boundary) -> std::optional<double> { return 1.0; }},
      {"ou-elliptic(0,inf)", [](double p, double q, Boundary b) { return ou_setup(Interval(0, kInf), 1.0, p, q, b); },
       {Boundary::dirichlet_left}, [](Boundary) -> std::optional<double> { return 1.0; }},
  };
}

std::vector<CatalogEntry> finite_mass_catalog() {
  return {lebesgue_entry(), power_entry(-0.5, {Boundary::ergodic}), power_entry(1.0, {Boundary::ergodic}),
          gauss_line_entry(), ou_line_entry()};
}

}  // namespace hardy
