#pragma once

// Absolutely continuous measures on an interval (−M, N), M, N ≤ ∞, given by a
// nonnegative density. Masses μ(a, b) = ∫_a^b dμ come from a lazily built
// table of cell integrals in a bounded reference coordinate; a divergent mass
// is reported as +inf, so 1/μ(a, b) evaluates to 0 as the bound formulas expect.

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "hardy/expr.hpp"

namespace hardy {

/// Open interval (left, right); left may be −inf and right +inf.
struct Interval {
  double left;
  double right;

  Interval(double l, double r);

  bool left_finite() const noexcept { return std::isfinite(left); }
  bool right_finite() const noexcept { return std::isfinite(right); }
  bool bounded() const noexcept { return left_finite() && right_finite(); }
  bool contains(double x) const noexcept { return x > left && x < right; }
};

/// Smooth monotone map x(t) from a bounded reference interval onto an interval.
///
///   bounded        identity on (left, right)
///   (L, +inf)      x = L + t/(1 − t),     t ∈ (0, 1)
///   (−inf, R)      x = R + t/(1 + t),     t ∈ (−1, 0)
///   (−inf, +inf)   x = tan(πt/2),         t ∈ (−1, 1)
class EndpointTransform {
 public:
  enum class Kind { identity, right_infinite, left_infinite, both_infinite };

  explicit EndpointTransform(const Interval& interval);

  Kind kind() const noexcept { return kind_; }
  double t_min() const noexcept { return t_min_; }
  double t_max() const noexcept { return t_max_; }

  double to_x(double t) const noexcept;
  double to_t(double x) const noexcept;
  double dx_dt(double t) const noexcept;

 private:
  Kind kind_;
  double left_;
  double right_;
  double t_min_;
  double t_max_;
};

EndpointTransform endpoint_transform(const Interval& interval);

using Density = std::function<double(double)>;

/// True when a mass returned by `cumulative` is the divergence flag.
inline bool is_divergent(double mass) noexcept { return std::isinf(mass); }

class WeightedMeasure {
 public:
  /// Number of table cells in the reference coordinate.
  static constexpr int kCells = 512;

  /// Samples the density at interior points and throws DomainError if it is
  /// negative anywhere.
  WeightedMeasure(Interval interval, Density density, std::string description);

  const Interval& interval() const noexcept;
  const EndpointTransform& transform() const noexcept;
  const std::string& description() const noexcept;

  /// Density at x; throws DomainError for negative or undefined values.
  double density(double x) const;

  /// μ(a, b) for left ≤ a ≤ b ≤ right, +inf when divergent.
  double cumulative(double a, double b) const;
  double total_mass() const;
  /// Same mass with bounds given in the reference coordinate.
  double cumulative_reference(double t_a, double t_b) const;

  /// Pure point parts are not representable.
  bool absolutely_continuous() const noexcept { return true; }

  WeightedMeasure scaled(double c) const;
  /// Image under x ↦ −x, living on (−right, −left).
  WeightedMeasure reflected() const;

  /// Integrand in the reference coordinate, ρ(x(t)) x'(t).
  double reference_density(double t) const;

 private:
  struct State;
  std::shared_ptr<const State> state_;
};

/// Mass of a measure between two reference coordinates (t_a ≤ t_b); the
/// interval endpoints are t_min() and t_max().
double cumulative_t(const WeightedMeasure& m, double t_a, double t_b);

/// ν̂_p with density (dν/dx)^{−1/(p−1)}.
WeightedMeasure dual_measure(const WeightedMeasure& nu, double p);

WeightedMeasure lebesgue(const Interval& interval);
WeightedMeasure power_weight(const Interval& interval, double alpha);
WeightedMeasure gaussian(const Interval& interval);
WeightedMeasure expression_measure(const Interval& interval, const Expression& density);

/// Catalog lookup: `lebesgue`, `power:<alpha>`, `gauss`, or an expression in x.
WeightedMeasure catalog_measure(std::string_view source, const Interval& interval);

/// Coefficients of L = a(x) d²/dx² + b(x) d/dx with reference point θ.
struct EllipticCoefficients {
  Expression a;
  Expression b;
  double theta;
};

struct MeasureTriple {
  WeightedMeasure mu;
  WeightedMeasure nu;
  WeightedMeasure nu_hat;
};

/// μ(dx) = e^{C(x)}/a(x) dx, ν(dx) = e^{C(x)} dx, ν̂(dx) = e^{−C(x)} dx with
/// C(x) = ∫_θ^x b/a.
MeasureTriple measures_from_elliptic(const EllipticCoefficients& coef, const Interval& interval);

}  // namespace hardy
