#include "hardy/measure.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "hardy/errors.hpp"
#include "hardy/quadrature.hpp"

namespace hardy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;
constexpr int kDensitySamples = 257;

const quad::Options kCellOptions{1e-12, 0.0, 2000};
const quad::Options kPartialOptions{1e-12, 0.0, 2000};

double accept(const quad::Result& r, const char* what) {
  if (std::isnan(r.value)) throw NumericError(std::string(what) + ": integral is undefined");
  if (!r.converged && std::isfinite(r.value) && r.error > 1e-8 * std::fabs(r.value) + 1e-300) {
    std::ostringstream os;
    os << what << ": quadrature did not converge (achieved relative tolerance "
       << r.error / std::max(std::fabs(r.value), 1e-300) << ")";
    throw NumericError(os.str());
  }
  return r.value;
}

}  // namespace

Interval::Interval(double l, double r) : left(l), right(r) {
  if (std::isnan(l) || std::isnan(r)) throw std::invalid_argument("interval endpoints must not be NaN");
  if (!(l < r)) throw std::invalid_argument("interval requires left < right");
  if (l == kInf || r == -kInf) throw std::invalid_argument("interval endpoints out of order");
}

EndpointTransform::EndpointTransform(const Interval& interval)
    : kind_(Kind::identity), left_(interval.left), right_(interval.right), t_min_(left_), t_max_(right_) {
  if (!interval.left_finite() && !interval.right_finite()) {
    kind_ = Kind::both_infinite;
    t_min_ = -1.0;
    t_max_ = 1.0;
  } else if (!interval.right_finite()) {
    kind_ = Kind::right_infinite;
    t_min_ = 0.0;
    t_max_ = 1.0;
  } else if (!interval.left_finite()) {
    kind_ = Kind::left_infinite;
    t_min_ = -1.0;
    t_max_ = 0.0;
  }
}

double EndpointTransform::to_x(double t) const noexcept {
  switch (kind_) {
    case Kind::identity:
      return t;
    case Kind::right_infinite:
      return t >= 1.0 ? kInf : left_ + t / (1.0 - t);
    case Kind::left_infinite:
      return t <= -1.0 ? -kInf : right_ + t / (1.0 + t);
    case Kind::both_infinite:
      if (t >= 1.0) return kInf;
      if (t <= -1.0) return -kInf;
      return std::tan(0.5 * kPi * t);
  }
  return t;
}

double EndpointTransform::to_t(double x) const noexcept {
  switch (kind_) {
    case Kind::identity:
      return x;
    case Kind::right_infinite: {
      if (x == kInf) return 1.0;
      const double u = x - left_;
      return u / (1.0 + u);
    }
    case Kind::left_infinite: {
      if (x == -kInf) return -1.0;
      const double u = x - right_;
      return u / (1.0 - u);
    }
    case Kind::both_infinite:
      if (x == kInf) return 1.0;
      if (x == -kInf) return -1.0;
      return 2.0 / kPi * std::atan(x);
  }
  return x;
}

double EndpointTransform::dx_dt(double t) const noexcept {
  switch (kind_) {
    case Kind::identity:
      return 1.0;
    case Kind::right_infinite:
      return 1.0 / ((1.0 - t) * (1.0 - t));
    case Kind::left_infinite:
      return 1.0 / ((1.0 + t) * (1.0 + t));
    case Kind::both_infinite: {
      const double c = std::cos(0.5 * kPi * t);
      return 0.5 * kPi / (c * c);
    }
  }
  return 1.0;
}

EndpointTransform endpoint_transform(const Interval& interval) { return EndpointTransform(interval); }

// ---------------------------------------------------------------------------

struct WeightedMeasure::State {
  struct Table {
    double width = 0.0;
    std::vector<double> cell;             // mass of cell k
    std::vector<double> from_left;        // Σ_{j<k} cell[j], k = 0..n
    std::vector<double> to_right;         // Σ_{j>k} cell[j], k = 0..n−1
    std::vector<double> interior_prefix;  // Σ_{1≤j<k} cell[j]
    std::vector<double> interior_suffix;  // Σ_{k≤j≤n−2} cell[j]
  };

  Interval interval;
  EndpointTransform transform;
  Density density_fn;
  std::string description;
  mutable std::once_flag once;
  mutable Table table;

  State(Interval i, Density d, std::string desc)
      : interval(i), transform(i), density_fn(std::move(d)), description(std::move(desc)) {}

  double density(double x) const {
    const double rho = density_fn(x);
    if (std::isnan(rho)) throw DomainError("undefined density", description, x);
    if (rho < 0.0) throw DomainError("negative density", description, x);
    return rho;
  }

  double g(double t) const {
    const double x = transform.to_x(t);
    if (!std::isfinite(x)) return 0.0;
    const double rho = density(x);
    return rho == 0.0 ? 0.0 : rho * transform.dx_dt(t);
  }

  double node(int k) const { return k == WeightedMeasure::kCells ? transform.t_max() : transform.t_min() + k * table.width; }

  int cell_of(double t) const {
    const int k = static_cast<int>(std::floor((t - transform.t_min()) / table.width));
    return std::clamp(k, 0, WeightedMeasure::kCells - 1);
  }

  double integrate(double a, double b) const {
    if (!(b > a)) return 0.0;
    auto f = [this](double t) { return g(t); };
    return accept(quad::integrate(f, a, b, kPartialOptions), description.c_str());
  }

  double tail(double t_end, double t_inner) const {
    auto f = [this](double t) { return g(t); };
    const auto r = quad::integrate_to_endpoint(f, t_end, t_inner, kCellOptions);
    return r.value;
  }

  void build() const {
    constexpr int n = WeightedMeasure::kCells;
    Table& tb = table;
    tb.width = (transform.t_max() - transform.t_min()) / n;
    tb.cell.assign(n, 0.0);
    auto f = [this](double t) { return g(t); };
    tb.cell[0] = tail(transform.t_min(), node(1));
    tb.cell[n - 1] = tail(transform.t_max(), node(n - 1));
    for (int k = 1; k < n - 1; ++k)
      tb.cell[k] = accept(quad::integrate(f, node(k), node(k + 1), kCellOptions), description.c_str());

    tb.from_left.assign(n + 1, 0.0);
    for (int k = 0; k < n; ++k) tb.from_left[k + 1] = tb.from_left[k] + tb.cell[k];
    tb.to_right.assign(n, 0.0);
    for (int k = n - 2; k >= 0; --k) tb.to_right[k] = tb.to_right[k + 1] + tb.cell[k + 1];
    tb.interior_prefix.assign(n, 0.0);
    for (int k = 2; k < n; ++k) tb.interior_prefix[k] = tb.interior_prefix[k - 1] + tb.cell[k - 1];
    tb.interior_suffix.assign(n, 0.0);
    for (int k = n - 2; k >= 1; --k) tb.interior_suffix[k] = tb.interior_suffix[k + 1] + tb.cell[k];
  }

  const Table& ready() const {
    std::call_once(once, [this] { build(); });
    return table;
  }

  // ∫ over interior cells j with lo ≤ j < hi (1 ≤ lo ≤ hi ≤ n−1).
  double interior_sum(int lo, int hi) const {
    if (hi <= lo) return 0.0;
    const Table& tb = table;
    const double upper_prefix = tb.interior_prefix[hi];
    const double lower_suffix = tb.interior_suffix[lo];
    const double via_prefix = upper_prefix - tb.interior_prefix[lo];
    const double via_suffix = lower_suffix - (hi <= WeightedMeasure::kCells - 2 ? tb.interior_suffix[hi] : 0.0);
    const bool prefix_ok = std::isfinite(upper_prefix);
    const bool suffix_ok = std::isfinite(lower_suffix);
    if (prefix_ok && suffix_ok) return upper_prefix <= lower_suffix ? via_prefix : via_suffix;
    if (prefix_ok) return via_prefix;
    if (suffix_ok) return via_suffix;
    double sum = 0.0;
    for (int j = lo; j < hi; ++j) sum += tb.cell[j];
    return sum;
  }

  double from_left(double t) const {
    const Table& tb = ready();
    const int k = cell_of(t);
    if (k == 0) return tail(transform.t_min(), t);
    return tb.from_left[k] + integrate(node(k), t);
  }

  double to_right(double t) const {
    const Table& tb = ready();
    const int k = cell_of(t);
    if (k == WeightedMeasure::kCells - 1) return tail(transform.t_max(), t);
    return tb.to_right[k] + integrate(t, node(k + 1));
  }

  double mass_t(double ta, double tb) const {
    if (ta > tb) throw std::invalid_argument("cumulative: requires a <= b");
    if (ta == tb) return 0.0;
    const bool a_end = ta <= transform.t_min();
    const bool b_end = tb >= transform.t_max();
    const Table& table_ref = ready();
    if (a_end && b_end) return table_ref.from_left[WeightedMeasure::kCells];
    if (a_end) return from_left(tb);
    if (b_end) return to_right(ta);
    const int ka = cell_of(ta);
    const int kb = cell_of(tb);
    if (ka == kb) return integrate(ta, tb);
    const double left_part = integrate(ta, node(ka + 1));
    const double right_part = integrate(node(kb), tb);
    const double middle = interior_sum(ka + 1, kb);
    const double sum = left_part + middle + right_part;
    return std::isnan(sum) ? kInf : sum;
  }
};

WeightedMeasure::WeightedMeasure(Interval interval, Density density, std::string description)
    : state_(std::make_shared<State>(interval, std::move(density), std::move(description))) {
  const auto& tr = state_->transform;
  for (int i = 0; i < kDensitySamples; ++i) {
    const double t = tr.t_min() + (i + 0.5) / kDensitySamples * (tr.t_max() - tr.t_min());
    state_->density(tr.to_x(t));
  }
}

const Interval& WeightedMeasure::interval() const noexcept { return state_->interval; }
const EndpointTransform& WeightedMeasure::transform() const noexcept { return state_->transform; }
const std::string& WeightedMeasure::description() const noexcept { return state_->description; }
double WeightedMeasure::density(double x) const { return state_->density(x); }
double WeightedMeasure::reference_density(double t) const { return state_->g(t); }

double WeightedMeasure::cumulative(double a, double b) const {
  if (std::isnan(a) || std::isnan(b)) throw std::invalid_argument("cumulative: NaN bound");
  if (a > b) throw std::invalid_argument("cumulative: requires a <= b");
  const auto& iv = state_->interval;
  if (a < iv.left || b > iv.right) throw std::invalid_argument("cumulative: bounds outside the interval");
  if (a == b) return 0.0;
  const auto& tr = state_->transform;
  const double ta = a <= iv.left ? tr.t_min() : tr.to_t(a);
  const double tb = b >= iv.right ? tr.t_max() : tr.to_t(b);
  return state_->mass_t(ta, tb);
}

double WeightedMeasure::cumulative_reference(double t_a, double t_b) const {
  if (std::isnan(t_a) || std::isnan(t_b)) throw std::invalid_argument("cumulative: NaN bound");
  const auto& tr = state_->transform;
  return state_->mass_t(std::max(t_a, tr.t_min()), std::min(t_b, tr.t_max()));
}

double cumulative_t(const WeightedMeasure& m, double t_a, double t_b) { return m.cumulative_reference(t_a, t_b); }

double WeightedMeasure::total_mass() const { return cumulative(interval().left, interval().right); }

WeightedMeasure WeightedMeasure::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("scale factor must be positive and finite");
  auto base = state_;
  std::ostringstream os;
  os << c << "*(" << base->description << ")";
  return WeightedMeasure(base->interval, [base, c](double x) { return c * base->density(x); }, os.str());
}

WeightedMeasure WeightedMeasure::reflected() const {
  auto base = state_;
  return WeightedMeasure(Interval(-base->interval.right, -base->interval.left),
                         [base](double x) { return base->density(-x); }, "reflect(" + base->description + ")");
}

WeightedMeasure dual_measure(const WeightedMeasure& nu, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("dual_measure: requires p > 1");
  const double exponent = -1.0 / (p - 1.0);
  std::ostringstream os;
  os << "dual[p=" << p << "](" << nu.description() << ")";
  // Subnormal densities carry too few digits to invert; they count as 0, so
  // the dual density is +inf there.
  auto floor_subnormal = [](double rho) { return rho < std::numeric_limits<double>::min() ? 0.0 : rho; };
  if (p == 2.0)
    return WeightedMeasure(
        nu.interval(), [nu, floor_subnormal](double x) { return 1.0 / floor_subnormal(nu.density(x)); }, os.str());
  return WeightedMeasure(
      nu.interval(),
      [nu, exponent, floor_subnormal](double x) { return std::pow(floor_subnormal(nu.density(x)), exponent); },
      os.str());
}

WeightedMeasure lebesgue(const Interval& interval) {
  return WeightedMeasure(interval, [](double) { return 1.0; }, "lebesgue");
}

WeightedMeasure power_weight(const Interval& interval, double alpha) {
  std::ostringstream os;
  os << "power:" << alpha;
  return WeightedMeasure(interval, [alpha](double x) { return std::pow(x, alpha); }, os.str());
}

WeightedMeasure gaussian(const Interval& interval) {
  return WeightedMeasure(interval, [](double x) { return std::exp(-0.5 * x * x); }, "gauss");
}

WeightedMeasure expression_measure(const Interval& interval, const Expression& density) {
  return WeightedMeasure(interval, [density](double x) { return density(x); }, density.to_string());
}

WeightedMeasure catalog_measure(std::string_view source, const Interval& interval) {
  if (source == "lebesgue") return lebesgue(interval);
  if (source == "gauss") return gaussian(interval);
  if (source.starts_with("power:")) {
    const std::string_view arg = source.substr(6);
    double alpha = 0.0;
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), alpha);
    if (ec != std::errc() || ptr != arg.data() + arg.size())
      throw std::invalid_argument("malformed power weight '" + std::string(source) + "'");
    return power_weight(interval, alpha);
  }
  return expression_measure(interval, parse(source));
}

// ---------------------------------------------------------------------------

namespace {

/// x ↦ ∫_θ^x f for a signed integrand, from a lazily built node table.
class Antiderivative {
 public:
  Antiderivative(const Interval& interval, std::function<double(double)> f, double theta)
      : transform_(interval), f_(std::move(f)), t_theta_(transform_.to_t(theta)) {}

  double operator()(double x) const {
    std::call_once(once_, [this] { build(); });
    const double t = transform_.to_t(x);
    const int k = cell_of(t);
    if (k == k_theta_) return integrate(t_theta_, t);
    if (t > t_theta_) return values_[k] + integrate(node(k), t);
    return values_[k + 1] - integrate(t, node(k + 1));
  }

 private:
  static constexpr int kCells = WeightedMeasure::kCells;

  double node(int k) const { return transform_.t_min() + k * width_; }
  int cell_of(double t) const {
    return std::clamp(static_cast<int>(std::floor((t - transform_.t_min()) / width_)), 0, kCells - 1);
  }

  // Signed ∫ between reference points a and b, integrated in x: drift ratios
  // are usually tame in x while the transform makes them steep near infinite ends.
  double integrate(double a, double b) const {
    if (a == b) return 0.0;
    const double xa = transform_.to_x(std::min(a, b));
    const double xb = transform_.to_x(std::max(a, b));
    const double v =
        accept(quad::integrate(f_, xa, xb, quad::Options{1e-12, 1e-15, 2000}), "antiderivative");
    return a < b ? v : -v;
  }

  void build() const {
    width_ = (transform_.t_max() - transform_.t_min()) / kCells;
    k_theta_ = cell_of(t_theta_);
    values_.assign(kCells + 1, 0.0);
    if (k_theta_ + 1 <= kCells - 1) values_[k_theta_ + 1] = integrate(t_theta_, node(k_theta_ + 1));
    for (int k = k_theta_ + 1; k < kCells - 1; ++k) values_[k + 1] = values_[k] + integrate(node(k), node(k + 1));
    if (k_theta_ >= 1) values_[k_theta_] = integrate(t_theta_, node(k_theta_));
    for (int k = k_theta_; k > 1; --k) values_[k - 1] = values_[k] - integrate(node(k - 1), node(k));
  }

  EndpointTransform transform_;
  std::function<double(double)> f_;
  double t_theta_;
  mutable std::once_flag once_;
  mutable double width_ = 0.0;
  mutable int k_theta_ = 0;
  mutable std::vector<double> values_;
};

}  // namespace

MeasureTriple measures_from_elliptic(const EllipticCoefficients& coef, const Interval& interval) {
  // A finite endpoint is admissible as reference point when b/a is integrable there.
  if (!(coef.theta >= interval.left && coef.theta <= interval.right) || !std::isfinite(coef.theta))
    throw std::invalid_argument("reference point theta must lie in the closure of the interval");
  const EndpointTransform tr(interval);
  for (int i = 0; i < kDensitySamples; ++i) {
    const double x = tr.to_x(tr.t_min() + (i + 0.5) / kDensitySamples * (tr.t_max() - tr.t_min()));
    if (!(coef.a(x) > 0.0)) throw DomainError("diffusion coefficient a(x) must be positive", coef.a.to_string(), x);
  }
  const Expression a = coef.a;
  const Expression b = coef.b;
  auto drift_ratio = [a, b](double x) {
    const double ax = a(x);
    if (!(ax > 0.0)) throw DomainError("diffusion coefficient a(x) must be positive", a.to_string(), x);
    return b(x) / ax;
  };
  auto c = std::make_shared<Antiderivative>(interval, drift_ratio, coef.theta);

  std::ostringstream tag;
  tag << "[a=" << a.to_string() << ", b=" << b.to_string() << ", theta=" << coef.theta << "]";
  WeightedMeasure mu(interval, [a, c](double x) { return std::exp((*c)(x)) / a(x); }, "elliptic_mu" + tag.str());
  WeightedMeasure nu(interval, [c](double x) { return std::exp((*c)(x)); }, "elliptic_nu" + tag.str());
  WeightedMeasure nu_hat(interval, [c](double x) { return std::exp(-(*c)(x)); }, "elliptic_nu_hat" + tag.str());
  return {std::move(mu), std::move(nu), std::move(nu_hat)};
}

}  // namespace hardy
