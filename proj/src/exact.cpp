#include "hardy/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hardy/errors.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/special.hpp"

namespace hardy {

namespace {

constexpr int kDelta1Grid = 1024;  // cells; 1025 grid points including x = 0

void check_exponents(double p, double q) { static_cast<void>(Exponents(p, q)); }

double link_power(double p, double q) { return 1.0 - 1.0 / p + 1.0 / q; }

}  // namespace

double exact_A(double p, double q) {
  check_exponents(p, q);
  const double log_num = std::log(p) / q + (1.0 - 1.0 / p) * std::log(q) + (1.0 / p - 1.0 / q) * std::log(p * q + p - q);
  const double log_den = std::log(p - 1.0) / p + log_beta(1.0 / q, 1.0 - 1.0 / p);
  return std::exp(log_num - log_den);
}

double prop_B(double p, double q) {
  check_exponents(p, q);
  return std::pow(p, 1.0 / q) * std::pow((p - 1.0) * q, 1.0 - 1.0 / p) / std::pow(p * q + p - q, link_power(p, q));
}

double prop_delta1_bar(double p, double q) {
  check_exponents(p, q);
  return std::pow(p, 1.0 / q) * std::pow((p - 1.0) * (q + 1.0), 1.0 - 1.0 / p) /
         std::pow(p * q + p - q, link_power(p, q));
}

double prop_A_star(double p, double q) {
  check_exponents(p, q);
  const double ps = conjugate(p);
  const double inner = (ps + q) / (std::numbers::pi * ps) * std::sin(std::numbers::pi * ps / (ps + q));
  return std::pow(ps / q, 1.0 / q) * std::pow(inner, 1.0 / ps + 1.0 / q);
}

std::string_view reading_name(Delta1Reading r) noexcept { return r == Delta1Reading::A ? "A" : "B"; }

Delta1Reading parse_reading(std::string_view text) {
  if (text == "A" || text == "a") return Delta1Reading::A;
  if (text == "B" || text == "b") return Delta1Reading::B;
  throw std::invalid_argument("delta1 reading must be A or B");
}

double prop_delta1(double p, double q, Delta1Reading reading) {
  check_exponents(p, q);
  const double ps = conjugate(p);
  const double gamma = q / (ps + q);
  const double prefactor = q * gamma / ps + 1.0;
  const double e = reading == Delta1Reading::A ? q / (gamma * ps) + 1.0 : prefactor;
  const double a = ps / q;

  auto integrand = [e, a](double y) { return std::pow(1.0 - std::pow(y, e), a); };
  const quad::Options opts{1e-10, 0.0, 2000};
  auto integral = [&](double lo, double hi) {
    const quad::Result r = quad::integrate(integrand, lo, hi, opts);
    if (!r.converged) throw NumericError("delta1: inner integral did not converge");
    return r.value;
  };

  const double h = 1.0 / kDelta1Grid;
  std::vector<double> cumulative(kDelta1Grid + 1, 0.0);
  for (int i = 0; i < kDelta1Grid; ++i) cumulative[i + 1] = cumulative[i] + integral(i * h, (i + 1) * h);

  int best = 1;
  double best_value = -1.0;
  for (int i = 1; i <= kDelta1Grid; ++i) {
    const double v = std::pow(i * h, -gamma) * cumulative[i];
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }

  // Golden section on the two cells around the best node.
  const int anchor = best - 1;
  const double lo = anchor * h;
  const double hi = std::min(1.0, (best + 1) * h);
  auto objective = [&](double x) { return std::pow(x, -gamma) * (cumulative[anchor] + integral(anchor * h, x)); };
  constexpr double kInvPhi = 0.6180339887498949;
  double a_ = std::max(lo, 1e-300), b_ = hi;
  double c = b_ - kInvPhi * (b_ - a_), d = a_ + kInvPhi * (b_ - a_);
  double fc = objective(c), fd = objective(d);
  while (b_ - a_ > 1e-12) {
    if (fc >= fd) {
      b_ = d;
      d = c;
      fd = fc;
      c = b_ - kInvPhi * (b_ - a_);
      fc = objective(c);
    } else {
      a_ = c;
      c = d;
      fc = fd;
      d = a_ + kInvPhi * (b_ - a_);
      fd = objective(d);
    }
  }
  const double sup = std::max({best_value, fc, fd});
  return std::pow(prefactor, -1.0 / q) * std::pow(sup, 1.0 / ps);
}

std::vector<std::string> chain_violations(const ImprovementChain& c, double slack) {
  std::vector<std::string> out;
  auto link = [&](double lhs, double rhs, const char* name) {
    if (!(lhs <= rhs + slack)) out.emplace_back(name);
  };
  link(c.B, c.delta1_bar, "B <= delta1_bar");
  link(c.delta1_bar, c.A_exact, "delta1_bar <= A");
  link(c.A_exact, c.A_star, "A <= A_star");
  link(c.A_star, c.delta1, "A_star <= delta1");
  link(c.delta1, c.kB, "delta1 <= kB");
  return out;
}

ImprovementChain improvement_chain(double p, double q, Delta1Reading reading) {
  check_exponents(p, q);
  if (q < p) throw HypothesisError("the improvement chain requires q >= p");
  ImprovementChain c;
  c.p = p;
  c.q = q;
  c.reading = reading;
  c.gamma_star = q / (conjugate(p) + q);
  c.B = prop_B(p, q);
  c.delta1_bar = prop_delta1_bar(p, q);
  c.A_exact = exact_A(p, q);
  c.A_star = prop_A_star(p, q);
  c.delta1 = prop_delta1(p, q, reading);
  c.kB = k_factor(p, q) * c.B;
  c.violations = chain_violations(c);
  return c;
}

}  // namespace hardy
