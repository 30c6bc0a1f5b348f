#pragma once

// Isoperimetric constants of weighted Hardy inequalities on an interval and
// the two-sided estimates of the optimal constant A they yield.
//
// All suprema run in the reference coordinate of the interval transform, on
// (t_min + δ, t_max − δ) with δ = 1e-12·(t_max − t_min). Extended arithmetic
// follows IEEE limits: a zero mass to a negative power is +inf, x/inf is 0,
// and an indeterminate objective (inf·0, inf/inf) counts as 0.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hardy/measure.hpp"
#include "hardy/special.hpp"

namespace hardy {

enum class Boundary { ergodic, dirichlet_left, dirichlet_right, dirichlet_both };

std::string_view boundary_name(Boundary b) noexcept;
/// Accepts both `dirichlet-left` and `dirichlet_left` spellings.
Boundary parse_boundary(std::string_view text);

/// Interval, measures, exponents and boundary kind of one inequality.
class HardySetup {
 public:
  /// ν̂ is derived from ν by dual_measure.
  HardySetup(WeightedMeasure mu, WeightedMeasure nu, Exponents exponents, Boundary boundary);
  /// ν̂ supplied directly; its density must match dual_measure(ν, p) at
  /// sampled points (relative 1e-9).
  HardySetup(WeightedMeasure mu, WeightedMeasure nu, WeightedMeasure nu_hat, Exponents exponents, Boundary boundary);

  const Interval& interval() const noexcept { return mu_.interval(); }
  const WeightedMeasure& mu() const noexcept { return mu_; }
  const WeightedMeasure& nu() const noexcept { return nu_; }
  const WeightedMeasure& nu_hat() const noexcept { return nu_hat_; }
  const Exponents& exponents() const noexcept { return exponents_; }
  Boundary boundary() const noexcept { return boundary_; }

  HardySetup with_boundary(Boundary b) const;
  HardySetup with_exponents(double p, double q) const;

 private:
  struct Unchecked {};
  HardySetup(Unchecked, WeightedMeasure mu, WeightedMeasure nu, WeightedMeasure nu_hat, Exponents e, Boundary b);
  void validate() const;

  WeightedMeasure mu_;
  WeightedMeasure nu_;
  WeightedMeasure nu_hat_;
  Exponents exponents_;
  Boundary boundary_;

  friend HardySetup reflect(const HardySetup& s);
  friend HardySetup swapped(const HardySetup& s);
};

/// Image under x ↦ −x; Dirichlet ends trade places.
HardySetup reflect(const HardySetup& s);
/// Exchange of μ and ν̂ (p = q = 2): μ' = ν̂, ν̂' = μ, boundary ergodic.
HardySetup swapped(const HardySetup& s);

struct PointOptimum {
  double value = 0.0;
  double x = 0.0;
};

struct PairOptimum {
  double value = 0.0;
  double x = 0.0;
  double y = 0.0;
  /// Refined values from different seeds disagreed by more than 1e-8.
  bool seeds_disagree = false;
};

/// B⁺ = sup_y ν̂(−M, y)^{1/p*} μ(y, N)^{1/q}.
PointOptimum b_plus(const HardySetup& s);
/// B⁻ = sup_x ν̂(x, N)^{1/p*} μ(−M, x)^{1/q}, computed as b_plus(reflect(s)).
PointOptimum b_minus(const HardySetup& s);
/// B* = sup_{x≤y} ν̂(x,y)^{(p−1)/p} / {μ(−M,x)^{p/(q(1−p))} + μ(y,N)^{p/(q(1−p))}}^{(p−1)/p}.
PairOptimum b_star(const HardySetup& s);
/// B_* = sup_{x≤y} ν̂(x,y)^{(p−1)/p} / {μ(−M,x)^{1/(1−q)} + μ(y,N)^{1/(1−q)}}^{(q−1)/q}.
PairOptimum b_substar(const HardySetup& s);
/// κ = sup_{x<y} [ν̂(x,y) / (μ(−M,x)^{−1} + μ(y,N)^{−1})]^{1/2}; p = q = 2.
PairOptimum kappa(const HardySetup& s);
/// κ₀ = sup_{x<y} [μ(x,y) / (ν̂(−M,x)^{−1} + ν̂(y,N)^{−1})]^{1/2}; p = q = 2.
PairOptimum kappa0(const HardySetup& s);

struct SplitBounds {
  double theta = 0.0;
  PointOptimum minus;  ///< B_θ⁻ = sup_{x<θ} ν̂(x,θ)^{1/p*} μ(−M,x)^{1/q}
  PointOptimum plus;   ///< B_θ⁺ = sup_{y>θ} ν̂(θ,y)^{1/p*} μ(y,N)^{1/q}
};

SplitBounds split_bounds(const HardySetup& s, double theta);
/// Bisection on θ for B_θ⁻ = B_θ⁺ (B_θ⁻ increases and B_θ⁺ decreases in θ).
SplitBounds balanced_split(const HardySetup& s);

struct ArgmaxPoint {
  std::string quantity;
  double x = 0.0;
  std::optional<double> y;
};

struct BoundsReport {
  Boundary boundary = Boundary::ergodic;
  double p = 2.0;
  double q = 2.0;
  std::optional<double> b_plus, b_minus, b_star, b_substar, kappa;
  std::optional<double> lower_A, upper_A;
  std::string lower_source;  ///< formula used, or why the bound is absent
  std::string upper_source;
  double factor_used = 0.0;
  std::vector<ArgmaxPoint> argmax_points;
  std::vector<std::string> notes;
};

/// Lower and upper estimates of A by boundary kind:
///   ergodic, p = q = 2      (κ, 2κ)
///   ergodic                 (B_*, k_{2,p}B*), upper only for 1 < p ≤ 2 ≤ q
///   dirichlet_left/right    (B±, k_{q,p}B±), upper only for q ≥ p
///   dirichlet_both          (κ₀, 2κ₀) for p = q = 2
BoundsReport two_sided(const HardySetup& s);

}  // namespace hardy
