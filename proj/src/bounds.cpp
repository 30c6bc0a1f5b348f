#include "hardy/bounds.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hardy/errors.hpp"

namespace hardy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMarginFraction = 1e-12;
constexpr int kLineGrid = 257;
constexpr int kPairGrid = 129;
constexpr int kSeeds = 3;
constexpr int kMaxSweeps = 200;
constexpr double kSeedAgreement = 1e-8;
constexpr double kTieTolerance = 1e-12;

double clean(double v) { return std::isnan(v) ? 0.0 : v; }

struct Range {
  double lo;
  double hi;
};

Range open_range(double t_lo, double t_hi, const EndpointTransform& tr) {
  const double margin = kMarginFraction * (tr.t_max() - tr.t_min());
  return {t_lo + margin, t_hi - margin};
}

double line_tolerance(const EndpointTransform& tr) { return 1e-10 * std::max(1.0, tr.t_max() - tr.t_min()); }

/// Golden-section maximum of f on [a, b]; ties go to the smaller argument.
template <class F>
PointOptimum golden_max(F& f, double a, double b, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? PointOptimum{fc, c} : PointOptimum{fd, d};
}

/// Golden section on [center − half, center + half] ∩ [lo, hi], re-centred
/// while the optimum sits on an interior edge of the bracket.
template <class F>
PointOptimum line_max(F& f, double center, double half, double lo, double hi, double tol) {
  PointOptimum best{-kInf, center};
  for (int round = 0; round < 64; ++round) {
    const double a = std::max(lo, center - half);
    const double b = std::min(hi, center + half);
    if (!(b > a)) break;
    const PointOptimum r = golden_max(f, a, b, tol);
    if (r.value > best.value || (r.value == best.value && r.x < best.x)) best = r;
    const bool at_edge = (r.x - a < 2.0 * tol && a > lo) || (b - r.x < 2.0 * tol && b < hi);
    if (!at_edge || !std::isfinite(r.value)) break;
    center = r.x;
  }
  return best;
}

/// Supremum of f over [lo, hi] in the reference coordinate.
template <class F>
PointOptimum sup_line(F&& f, Range range, double tol) {
  if (!(range.hi > range.lo)) return {0.0, range.lo};
  const Eigen::ArrayXd t = Eigen::ArrayXd::LinSpaced(kLineGrid, range.lo, range.hi);
  PointOptimum best{-kInf, range.lo};
  for (int i = 0; i < kLineGrid; ++i) {
    const double v = clean(f(t[i]));
    if (v > best.value) best = {v, t[i]};
  }
  if (!std::isfinite(best.value) || best.value <= 0.0) return best;
  const double h = (range.hi - range.lo) / (kLineGrid - 1);
  auto g = [&](double s) { return clean(f(s)); };
  const PointOptimum r = line_max(g, best.x, h, range.lo, range.hi, tol);
  return r.value > best.value ? r : best;
}

/// Supremum over t_x < t_y of obj(outer(L, x), inner(x, y), outer(y, R)).
template <class Obj>
PairOptimum sup_pair(const WeightedMeasure& outer, const WeightedMeasure& inner, Obj obj) {
  const EndpointTransform& tr = outer.transform();
  const Range range = open_range(tr.t_min(), tr.t_max(), tr);
  const double tol = line_tolerance(tr);
  const int n = kPairGrid;
  const Eigen::ArrayXd t = Eigen::ArrayXd::LinSpaced(n, range.lo, range.hi);

  Eigen::ArrayXd left(n), right(n), cell(n - 1);
  for (int i = 0; i < n; ++i) {
    left[i] = outer.cumulative_reference(tr.t_min(), t[i]);
    right[i] = outer.cumulative_reference(t[i], tr.t_max());
    if (i + 1 < n) cell[i] = inner.cumulative_reference(t[i], t[i + 1]);
  }
  Eigen::ArrayXXd value = Eigen::ArrayXXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double m = 0.0;
    for (int j = i + 1; j < n; ++j) {
      m += cell[j - 1];
      value(i, j) = clean(obj(left[i], m, right[j]));
    }
  }

  // Best seeds in lexicographic scan order; strict comparison keeps the
  // earliest cell among equal values.
  std::array<std::pair<int, int>, kSeeds> seeds{};
  std::array<double, kSeeds> seed_values{};
  seed_values.fill(-kInf);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double v = value(i, j);
      if (v == kInf) return {kInf, tr.to_x(t[i]), tr.to_x(t[j]), false};
      for (int s = 0; s < kSeeds; ++s) {
        if (v > seed_values[s]) {
          for (int u = kSeeds - 1; u > s; --u) {
            seed_values[u] = seed_values[u - 1];
            seeds[u] = seeds[u - 1];
          }
          seed_values[s] = v;
          seeds[s] = {i, j};
          break;
        }
      }
    }
  }
  if (!(seed_values[0] > 0.0)) return {0.0, tr.to_x(t[0]), tr.to_x(t[0]), false};

  auto eval = [&](double tx, double ty) {
    if (!(ty > tx)) return 0.0;
    return clean(obj(outer.cumulative_reference(tr.t_min(), tx), inner.cumulative_reference(tx, ty),
                     outer.cumulative_reference(ty, tr.t_max())));
  };

  const double h = (range.hi - range.lo) / (n - 1);
  struct Refined {
    double value, tx, ty;
  };
  std::vector<Refined> refined;
  for (int s = 0; s < kSeeds; ++s) {
    if (!(seed_values[s] > 0.0)) break;
    double tx = t[seeds[s].first];
    double ty = t[seeds[s].second];
    double v = eval(tx, ty);
    double hx = h, hy = h;
    for (int sweep = 0; sweep < kMaxSweeps && std::isfinite(v); ++sweep) {
      const double v_old = v;
      const double tx_old = tx, ty_old = ty;
      auto along_x = [&](double s_) { return eval(s_, ty); };
      const PointOptimum rx = line_max(along_x, tx, hx, range.lo, ty, tol);
      if (rx.value > v) {
        v = rx.value;
        tx = rx.x;
      }
      auto along_y = [&](double s_) { return eval(tx, s_); };
      const PointOptimum ry = line_max(along_y, ty, hy, tx, range.hi, tol);
      if (ry.value > v) {
        v = ry.value;
        ty = ry.x;
      }
      const double dx = std::fabs(tx - tx_old);
      const double dy = std::fabs(ty - ty_old);
      hx = std::max(4.0 * dx, 16.0 * tol);
      hy = std::max(4.0 * dy, 16.0 * tol);
      if (dx + dy < 1e-10 || (v - v_old) <= 1e-14 * std::fabs(v)) break;
    }
    refined.push_back({v, tx, ty});
  }

  double best = -kInf, worst = kInf;
  for (const auto& r : refined) {
    best = std::max(best, r.value);
    worst = std::min(worst, r.value);
  }
  const Refined* pick = nullptr;
  for (const auto& r : refined) {
    if (r.value < best * (1.0 - kTieTolerance)) continue;
    if (!pick || r.tx < pick->tx || (r.tx == pick->tx && r.ty < pick->ty)) pick = &r;
  }
  const bool disagree = std::isfinite(best) && best > 0.0 && (best - worst) > kSeedAgreement * best;
  return {pick->value, tr.to_x(pick->tx), tr.to_x(pick->ty), disagree};
}

void require_linear(const HardySetup& s, const char* what) {
  if (!s.exponents().linear()) throw HypothesisError(std::string(what) + " requires p = q = 2");
}

void require_finite_mu(const HardySetup& s, const char* what) {
  if (is_divergent(s.mu().total_mass()))
    throw HypothesisError(std::string(what) + " requires a finite total mass of mu");
}

double kappa_objective(double outer_left, double inner, double outer_right) {
  return std::sqrt(inner / (1.0 / outer_left + 1.0 / outer_right));
}

std::string format(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view boundary_name(Boundary b) noexcept {
  switch (b) {
    case Boundary::ergodic:
      return "ergodic";
    case Boundary::dirichlet_left:
      return "dirichlet-left";
    case Boundary::dirichlet_right:
      return "dirichlet-right";
    case Boundary::dirichlet_both:
      return "dirichlet-both";
  }
  return "?";
}

Boundary parse_boundary(std::string_view text) {
  std::string s(text);
  std::replace(s.begin(), s.end(), '_', '-');
  for (Boundary b : {Boundary::ergodic, Boundary::dirichlet_left, Boundary::dirichlet_right, Boundary::dirichlet_both})
    if (boundary_name(b) == s) return b;
  throw std::invalid_argument("unknown boundary kind '" + std::string(text) + "'");
}

HardySetup::HardySetup(WeightedMeasure mu, WeightedMeasure nu, Exponents exponents, Boundary boundary)
    : HardySetup(Unchecked{}, mu, nu, dual_measure(nu, exponents.p), exponents, boundary) {
  validate();
}

HardySetup::HardySetup(WeightedMeasure mu, WeightedMeasure nu, WeightedMeasure nu_hat, Exponents exponents,
                       Boundary boundary)
    : HardySetup(Unchecked{}, std::move(mu), std::move(nu), std::move(nu_hat), exponents, boundary) {
  validate();
  const auto& tr = mu_.transform();
  const double exponent = -1.0 / (exponents_.p - 1.0);
  for (int i = 0; i < 33; ++i) {
    const double x = tr.to_x(tr.t_min() + (i + 0.5) / 33.0 * (tr.t_max() - tr.t_min()));
    const double expected = exponents_.p == 2.0 ? 1.0 / nu_.density(x) : std::pow(nu_.density(x), exponent);
    const double stored = nu_hat_.density(x);
    if (std::isinf(expected) && std::isinf(stored)) continue;
    if (!(std::fabs(stored - expected) <= 1e-9 * std::max(std::fabs(expected), 1e-300)) &&
        !(expected < 1e-290 && stored < 1e-290))
      throw HypothesisError("nu_hat is inconsistent with nu and p at x = " + format(x));
  }
}

HardySetup::HardySetup(Unchecked, WeightedMeasure mu, WeightedMeasure nu, WeightedMeasure nu_hat, Exponents e,
                       Boundary b)
    : mu_(std::move(mu)), nu_(std::move(nu)), nu_hat_(std::move(nu_hat)), exponents_(e), boundary_(b) {}

void HardySetup::validate() const {
  const Interval& a = mu_.interval();
  for (const WeightedMeasure* m : {&nu_, &nu_hat_}) {
    if (m->interval().left != a.left || m->interval().right != a.right)
      throw std::invalid_argument("all measures of a setup must live on the same interval");
  }
  if (boundary_ == Boundary::ergodic && is_divergent(mu_.total_mass()))
    throw HypothesisError("the ergodic case requires a finite total mass of mu");
}

HardySetup HardySetup::with_boundary(Boundary b) const {
  HardySetup s(Unchecked{}, mu_, nu_, nu_hat_, exponents_, b);
  s.validate();
  return s;
}

HardySetup HardySetup::with_exponents(double p, double q) const {
  if (p == exponents_.p) return HardySetup(Unchecked{}, mu_, nu_, nu_hat_, Exponents(p, q), boundary_);
  return HardySetup(mu_, nu_, Exponents(p, q), boundary_);
}

HardySetup reflect(const HardySetup& s) {
  Boundary b = s.boundary();
  if (b == Boundary::dirichlet_left)
    b = Boundary::dirichlet_right;
  else if (b == Boundary::dirichlet_right)
    b = Boundary::dirichlet_left;
  return HardySetup(HardySetup::Unchecked{}, s.mu().reflected(), s.nu().reflected(), s.nu_hat().reflected(),
                    s.exponents(), b);
}

HardySetup swapped(const HardySetup& s) {
  require_linear(s, "swapped");
  HardySetup out(HardySetup::Unchecked{}, s.nu_hat(), dual_measure(s.mu(), 2.0), s.mu(), s.exponents(),
                 Boundary::ergodic);
  out.validate();
  return out;
}

// ---------------------------------------------------------------------------

PointOptimum b_plus(const HardySetup& s) {
  const auto& tr = s.mu().transform();
  const double inv_ps = 1.0 / s.exponents().p_star;
  const double inv_q = 1.0 / s.exponents().q;
  auto f = [&](double t) {
    return std::pow(s.nu_hat().cumulative_reference(tr.t_min(), t), inv_ps) *
           std::pow(s.mu().cumulative_reference(t, tr.t_max()), inv_q);
  };
  PointOptimum r = sup_line(f, open_range(tr.t_min(), tr.t_max(), tr), line_tolerance(tr));
  r.x = tr.to_x(r.x);
  return r;
}

PointOptimum b_minus(const HardySetup& s) {
  PointOptimum r = b_plus(reflect(s));
  r.x = -r.x;
  return r;
}

PairOptimum b_star(const HardySetup& s) {
  require_finite_mu(s, "B*");
  const double p = s.exponents().p;
  const double q = s.exponents().q;
  const double beta = p / (q * (1.0 - p));
  const double gamma = (p - 1.0) / p;
  return sup_pair(s.mu(), s.nu_hat(), [beta, gamma](double a, double m, double c) {
    return std::pow(m / (std::pow(a, beta) + std::pow(c, beta)), gamma);
  });
}

PairOptimum b_substar(const HardySetup& s) {
  if (s.exponents().p == s.exponents().q) return b_star(s);
  require_finite_mu(s, "B_*");
  const double p = s.exponents().p;
  const double q = s.exponents().q;
  const double alpha = (p - 1.0) / p;
  const double beta = 1.0 / (1.0 - q);
  const double gamma = (q - 1.0) / q;
  return sup_pair(s.mu(), s.nu_hat(), [alpha, beta, gamma](double a, double m, double c) {
    return std::pow(m, alpha) / std::pow(std::pow(a, beta) + std::pow(c, beta), gamma);
  });
}

PairOptimum kappa(const HardySetup& s) {
  require_linear(s, "kappa");
  require_finite_mu(s, "kappa");
  return sup_pair(s.mu(), s.nu_hat(), kappa_objective);
}

PairOptimum kappa0(const HardySetup& s) {
  require_linear(s, "kappa0");
  return sup_pair(s.nu_hat(), s.mu(), kappa_objective);
}

SplitBounds split_bounds(const HardySetup& s, double theta) {
  if (!s.interval().contains(theta)) throw std::invalid_argument("split point must lie inside the interval");
  const auto& tr = s.mu().transform();
  const double t_theta = tr.to_t(theta);
  const double inv_ps = 1.0 / s.exponents().p_star;
  const double inv_q = 1.0 / s.exponents().q;
  const double tol = line_tolerance(tr);
  auto minus = [&](double t) {
    return std::pow(s.nu_hat().cumulative_reference(t, t_theta), inv_ps) *
           std::pow(s.mu().cumulative_reference(tr.t_min(), t), inv_q);
  };
  auto plus = [&](double t) {
    return std::pow(s.nu_hat().cumulative_reference(t_theta, t), inv_ps) *
           std::pow(s.mu().cumulative_reference(t, tr.t_max()), inv_q);
  };
  const Range full = open_range(tr.t_min(), tr.t_max(), tr);
  SplitBounds out;
  out.theta = theta;
  out.minus = sup_line(minus, {full.lo, t_theta}, tol);
  out.plus = sup_line(plus, {t_theta, full.hi}, tol);
  out.minus.x = tr.to_x(out.minus.x);
  out.plus.x = tr.to_x(out.plus.x);
  return out;
}

SplitBounds balanced_split(const HardySetup& s) {
  const auto& tr = s.mu().transform();
  const Range full = open_range(tr.t_min(), tr.t_max(), tr);
  double lo = full.lo, hi = full.hi;
  SplitBounds best = split_bounds(s, tr.to_x(0.5 * (lo + hi)));
  for (int it = 0; it < 80 && hi - lo > 1e-12 * (full.hi - full.lo); ++it) {
    const double mid = 0.5 * (lo + hi);
    best = split_bounds(s, tr.to_x(mid));
    if (best.minus.value < best.plus.value)
      lo = mid;
    else if (best.minus.value > best.plus.value)
      hi = mid;
    else
      break;
  }
  return best;
}

// ---------------------------------------------------------------------------

BoundsReport two_sided(const HardySetup& s) {
  BoundsReport rep;
  const Exponents& e = s.exponents();
  rep.boundary = s.boundary();
  rep.p = e.p;
  rep.q = e.q;

  auto note_pair = [&rep](const char* name, const PairOptimum& r) {
    rep.argmax_points.push_back({name, r.x, r.y});
    if (r.seeds_disagree)
      rep.notes.push_back(std::string("refinement seeds for ") + name + " disagree beyond 1e-8 (non-concave objective)");
  };

  const PointOptimum bp = b_plus(s);
  const PointOptimum bm = b_minus(s);
  rep.b_plus = bp.value;
  rep.b_minus = bm.value;
  rep.argmax_points.push_back({"B+", bp.x, std::nullopt});
  rep.argmax_points.push_back({"B-", bm.x, std::nullopt});

  const bool mu_finite = !is_divergent(s.mu().total_mass());
  if (mu_finite) {
    const PairOptimum star = b_star(s);
    rep.b_star = star.value;
    note_pair("B*", star);
    if (e.p == e.q) {
      rep.b_substar = star.value;
    } else {
      const PairOptimum sub = b_substar(s);
      rep.b_substar = sub.value;
      note_pair("B_*", sub);
    }
  } else {
    rep.notes.push_back("mu has infinite total mass: B* and B_* are not defined");
  }

  switch (s.boundary()) {
    case Boundary::ergodic:
      if (e.linear()) {
        const PairOptimum k = kappa(s);
        rep.kappa = k.value;
        note_pair("kappa", k);
        rep.lower_A = k.value;
        rep.upper_A = 2.0 * k.value;
        rep.factor_used = 2.0;
        rep.lower_source = "kappa";
        rep.upper_source = "2*kappa";
        if (rep.b_star && std::fabs(*rep.b_star - k.value) > 1e-9 * k.value)
          rep.notes.push_back("kappa and B* at p = q = 2 disagree beyond 1e-9");
      } else {
        rep.lower_A = rep.b_substar;
        rep.lower_source = "B_*";
        if (e.p <= 2.0 && e.q >= 2.0) {
          rep.factor_used = k_factor(e.p, 2.0);
          rep.upper_A = rep.factor_used * *rep.b_star;
          rep.upper_source = "k_{2,p}*B*";
        } else {
          rep.upper_source = "no certified upper bound: the ergodic estimate requires 1 < p <= 2 <= q";
        }
      }
      break;
    case Boundary::dirichlet_left:
    case Boundary::dirichlet_right: {
      const bool left = s.boundary() == Boundary::dirichlet_left;
      const double b = left ? bp.value : bm.value;
      rep.lower_A = b;
      rep.lower_source = left ? "B+" : "B-";
      if (e.q_ge_p) {
        rep.factor_used = k_factor(e);
        rep.upper_A = rep.factor_used * b;
        rep.upper_source = left ? "k_{q,p}*B+" : "k_{q,p}*B-";
      } else {
        rep.upper_source = "no certified upper bound: the Dirichlet estimate requires q >= p";
      }
      break;
    }
    case Boundary::dirichlet_both:
      if (e.linear()) {
        const PairOptimum k0 = kappa0(s);
        note_pair("kappa0", k0);
        rep.lower_A = k0.value;
        rep.upper_A = 2.0 * k0.value;
        rep.factor_used = 2.0;
        rep.lower_source = "kappa0";
        rep.upper_source = "2*kappa0";
      } else {
        rep.lower_source = "no certified lower bound: kappa0 requires p = q = 2";
        rep.upper_source = "no certified upper bound: kappa0 requires p = q = 2";
      }
      break;
  }
  return rep;
}

}  // namespace hardy
