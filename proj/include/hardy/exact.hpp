#pragma once

// Closed-form constants for the model case μ = ν = Lebesgue on (0, 1) with
// f(0) = 0, and the improved estimates around the exact constant:
//
//   B ≤ δ̄₁ ≤ A ≤ A* ≤ δ₁ ≤ k_{q,p}·B.

#include <string>
#include <string_view>
#include <vector>

namespace hardy {

/// A = p^{1/q} q^{1−1/p} (pq+p−q)^{1/p−1/q} / [(p−1)^{1/p} B(1/q, 1−1/p)].
double exact_A(double p, double q);

/// B = p^{1/q} ((p−1)q)^{1−1/p} / (pq+p−q)^{1−1/p+1/q}; the model-case B⁺.
double prop_B(double p, double q);

/// δ̄₁ = p^{1/q} ((p−1)(q+1))^{1−1/p} / (pq+p−q)^{1−1/p+1/q}.
double prop_delta1_bar(double p, double q);

/// A* = (p*/q)^{1/q} [ (p*+q)/(π p*) · sin(π p*/(p*+q)) ]^{1/p*+1/q}.
double prop_A_star(double p, double q);

/// Exponent of y inside δ₁. With γ* = q/(p*+q):
///   A:  E = q/(γ* p*) + 1
///   B:  E = qγ*/p* + 1   (same expression as the prefactor; default)
enum class Delta1Reading { A, B };

std::string_view reading_name(Delta1Reading r) noexcept;
Delta1Reading parse_reading(std::string_view text);

/// δ₁ = (qγ*/p* + 1)^{−1/q} [ sup_{x∈(0,1]} x^{−γ*} ∫₀ˣ (1 − y^E)^{p*/q} dy ]^{1/p*}.
double prop_delta1(double p, double q, Delta1Reading reading = Delta1Reading::B);

struct ImprovementChain {
  double p = 0.0;
  double q = 0.0;
  double B = 0.0;
  double delta1_bar = 0.0;
  double A_exact = 0.0;
  double A_star = 0.0;
  double delta1 = 0.0;
  double kB = 0.0;
  double gamma_star = 0.0;
  Delta1Reading reading = Delta1Reading::B;
  /// One entry per failed link, e.g. "A_star <= delta1".
  std::vector<std::string> violations;

  bool ordered() const noexcept { return violations.empty(); }
};

/// Slack allowed on each link of the chain.
inline constexpr double kChainSlack = 1e-9;

/// Assembles and checks the chain; requires q ≥ p.
ImprovementChain improvement_chain(double p, double q, Delta1Reading reading = Delta1Reading::B);

/// Re-checks the ordering of an already assembled chain.
std::vector<std::string> chain_violations(const ImprovementChain& c, double slack = kChainSlack);

}  // namespace hardy
