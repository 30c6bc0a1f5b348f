#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <numbers>
#include <stdexcept>

namespace hardy {

/// ln Γ(x) for x > 0 by the Lanczos approximation (g = 7, 9 terms), with the
/// reflection formula below 1/2. Relative error of Γ is about 1e-15.
template <std::floating_point Scalar>
Scalar log_gamma(Scalar x) {
  static constexpr std::array<Scalar, 9> kCoef{
      Scalar(0.99999999999980993),  Scalar(676.5203681218851),     Scalar(-1259.1392167224028),
      Scalar(771.32342877765313),   Scalar(-176.61502916214059),   Scalar(12.507343278686905),
      Scalar(-0.13857109526572012), Scalar(9.9843695780195716e-6), Scalar(1.5056327351493116e-7)};
  constexpr Scalar g = 7;
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  if (!(x > 0)) throw std::domain_error("log_gamma: argument must be positive");
  if (x < Scalar(0.5)) return std::log(pi / std::sin(pi * x)) - log_gamma(Scalar(1) - x);

  x -= 1;
  Scalar a = kCoef[0];
  for (int i = 1; i < 9; ++i) a += kCoef[i] / (x + Scalar(i));
  const Scalar t = x + g + Scalar(0.5);
  return Scalar(0.5) * std::log(2 * pi) + (x + Scalar(0.5)) * std::log(t) - t + std::log(a);
}

/// ln B(α, β) = ln Γ(α) + ln Γ(β) − ln Γ(α + β).
template <std::floating_point Scalar>
Scalar log_beta(Scalar alpha, Scalar beta) {
  if (!(alpha > 0) || !(beta > 0)) throw std::domain_error("log_beta: arguments must be positive");
  return log_gamma(alpha) + log_gamma(beta) - log_gamma(alpha + beta);
}

template <std::floating_point Scalar>
Scalar beta_function(Scalar alpha, Scalar beta) {
  return std::exp(log_beta(alpha, beta));
}

/// Hölder conjugate p/(p − 1).
template <std::floating_point Scalar>
constexpr Scalar conjugate(Scalar p) {
  if (!(p > 1)) throw std::domain_error("conjugate: exponent must exceed 1");
  return p / (p - 1);
}

/// The exponent pair (p, q) of a Hardy-type inequality, p, q ∈ (1, ∞).
struct Exponents {
  double p;
  double q;
  double p_star;
  bool q_ge_p;

  Exponents(double p_, double q_) : p(p_), q(q_), p_star(0.0), q_ge_p(q_ >= p_) {
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("exponent p must lie in (1, inf)");
    if (!(q > 1.0) || !std::isfinite(q)) throw std::invalid_argument("exponent q must lie in (1, inf)");
    p_star = conjugate(p);
  }

  bool linear() const noexcept { return p == 2.0 && q == 2.0; }
};

/// Gap below which k_{q,p} switches to its diagonal limit.
inline constexpr double kDiagonalThreshold = 1e-8;

/// The sharp factor k_{q,p} relating B± to the optimal Dirichlet constants:
///
///   k_{q,p} = [ (q − p) / (p B(p/(q − p), p(q − 1)/(q − p))) ]^{1/p − 1/q},
///
/// with the limit k_{p,p} = p^{1/p} (p*)^{1/p*} on the diagonal. Requires q ≥ p.
template <std::floating_point Scalar>
Scalar k_factor(Scalar p, Scalar q) {
  if (!(p > 1) || !(q > 1)) throw std::domain_error("k_factor: exponents must exceed 1");
  if (q < p) throw std::domain_error("k_factor: requires q >= p");
  if (q - p < Scalar(kDiagonalThreshold)) {
    const Scalar ps = conjugate(p);
    return std::pow(p, 1 / p) * std::pow(ps, 1 / ps);
  }
  const Scalar r = q - p;
  const Scalar log_base = std::log(r) - std::log(p) - log_beta(p / r, p * (q - 1) / r);
  return std::exp((1 / p - 1 / q) * log_base);
}

inline double k_factor(const Exponents& e) { return k_factor(e.p, e.q); }

}  // namespace hardy
