#pragma once

// Adaptive Gauss–Kronrod (7/15) quadrature and graded integration toward an
// endpoint where the integrand may be singular or the integral divergent.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace hardy::quad {

struct Options {
  double rel_tol = 1e-12;
  double abs_tol = 0.0;
  int max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  int evaluations = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a, b, value, error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

template <class F>
Piece gauss_kronrod(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  return {a, b, kronrod * half, std::fabs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive G7/K15 quadrature of f over [a, b] (a ≤ b).
template <class F>
Result integrate(F&& f, double a, double b, const Options& opts = {}) {
  Result out;
  if (!(b > a)) return out;
  detail::Piece first = detail::gauss_kronrod(f, a, b);
  out.evaluations = 15;
  if (first.error <= std::max(opts.abs_tol, opts.rel_tol * std::fabs(first.value))) {
    out.value = first.value;
    out.error = first.error;
    return out;
  }
  std::priority_queue<detail::Piece> pieces;
  double total = first.value;
  double error = first.error;
  pieces.push(first);
  while (error > std::max(opts.abs_tol, opts.rel_tol * std::fabs(total))) {
    if (!std::isfinite(total) || static_cast<int>(pieces.size()) >= opts.max_intervals) {
      out.converged = false;
      break;
    }
    detail::Piece worst = pieces.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a) || !(mid < worst.b)) {
      out.converged = false;
      break;
    }
    pieces.pop();
    const detail::Piece left = detail::gauss_kronrod(f, worst.a, mid);
    const detail::Piece right = detail::gauss_kronrod(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    pieces.push(left);
    pieces.push(right);
  }
  // Re-sum to drop the drift of the running updates.
  total = 0.0;
  error = 0.0;
  std::vector<detail::Piece> all;
  all.reserve(pieces.size());
  while (!pieces.empty()) {
    all.push_back(pieces.top());
    pieces.pop();
  }
  std::sort(all.begin(), all.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
  for (const auto& p : all) {
    total += p.value;
    error += p.error;
  }
  out.value = total;
  out.error = error;
  return out;
}

struct TailResult {
  double value = 0.0;  ///< +inf when divergent
  bool divergent = false;
  bool converged = true;
  int levels = 0;
};

/// Integrates a nonnegative f from `t_end` to `t_inner` by graded bisection
/// toward `t_end`: pieces [t_end + w/2^{k+1}, t_end + w/2^k] for k < max_levels.
/// Pieces that stop shrinking geometrically signal divergence (+inf); a
/// geometric remainder is added once the pieces do shrink.
template <class F>
TailResult integrate_to_endpoint(F&& f, double t_end, double t_inner, const Options& opts = {},
                                 int max_levels = 60) {
  TailResult out;
  const double w = t_inner - t_end;
  if (w == 0.0) return out;
  const double resolution = 64.0 * std::max(std::fabs(t_end), 1e-300) * std::numeric_limits<double>::epsilon();

  double sum = 0.0;
  double prev_piece = -1.0;
  double last_piece = -1.0;
  double outer = t_inner;
  for (int k = 0; k < max_levels; ++k) {
    const double inner = t_end + std::ldexp(w, -(k + 1));
    if (std::fabs(inner - t_end) < resolution) break;
    const double lo = std::min(inner, outer);
    const double hi = std::max(inner, outer);
    const Result piece = integrate(f, lo, hi, opts);
    ++out.levels;
    if (!std::isfinite(piece.value)) {
      out.value = std::numeric_limits<double>::infinity();
      out.divergent = true;
      return out;
    }
    if (!piece.converged) out.converged = false;
    sum += piece.value;
    prev_piece = last_piece;
    last_piece = piece.value;
    outer = inner;
    if (k >= 3 && last_piece <= opts.rel_tol * sum && (prev_piece < 0.0 || last_piece <= prev_piece)) {
      if (prev_piece > 0.0) {
        const double r = last_piece / prev_piece;
        if (r < 1.0) sum += last_piece * r / (1.0 - r);
      }
      out.value = sum;
      return out;
    }
  }
  if (last_piece <= 0.0) {
    out.value = sum;
    return out;
  }
  const double r = prev_piece > 0.0 ? last_piece / prev_piece : 1.0;
  if (r >= 1.0 - 1e-6) {
    out.value = std::numeric_limits<double>::infinity();
    out.divergent = true;
    return out;
  }
  out.value = sum + last_piece * r / (1.0 - r);
  return out;
}

}  // namespace hardy::quad
