#include "hardy/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "hardy/catalog.hpp"
#include "hardy/errors.hpp"
#include "hardy/oracle.hpp"

namespace hardy::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return std::string(s);
}

double parse_extended(std::string_view text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf") return kInf;
  if (t == "-inf") return -kInf;
  double v = 0.0;
  const char* first = t.data();
  if (!t.empty() && t.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw std::invalid_argument("malformed number '" + t + "'");
  return v;
}

std::pair<std::string, std::string> split_pair(const std::string& text, const char* what) {
  const auto comma = text.find(',');
  if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos)
    throw std::invalid_argument(std::string(what) + " must have the form a,b");
  return {text.substr(0, comma), text.substr(comma + 1)};
}

}  // namespace

// ---------------------------------------------------------------------------

Interval parse_interval(const std::string& text) {
  const auto [l, r] = split_pair(text, "interval");
  return Interval(parse_extended(l), parse_extended(r));
}

std::pair<double, double> parse_range(const std::string& text) {
  const auto [l, r] = split_pair(text, "range");
  const double lo = parse_extended(l), hi = parse_extended(r);
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
    throw std::invalid_argument("range needs finite bounds with lo <= hi");
  return {lo, hi};
}

HardySetup build_setup(const JobSpec& job) {
  const Interval interval = parse_interval(job.interval);
  const Exponents e(job.p, job.q);
  const Boundary boundary = parse_boundary(job.boundary);
  const bool elliptic = job.a || job.b || job.theta;
  if (elliptic) {
    if (job.mu || job.nu)
      throw std::invalid_argument("give either --mu/--nu or the elliptic coefficients --a/--b/--theta, not both");
    if (!job.a || !job.b) throw std::invalid_argument("the elliptic source needs both --a and --b");
    double theta = 0.0;
    if (job.theta) {
      theta = *job.theta;
    } else if (interval.bounded()) {
      theta = 0.5 * (interval.left + interval.right);
    } else if (interval.left_finite()) {
      theta = interval.left + 1.0;
    } else if (interval.right_finite()) {
      theta = interval.right - 1.0;
    }
    const MeasureTriple t = measures_from_elliptic({parse(*job.a), parse(*job.b), theta}, interval);
    if (e.p == 2.0) return HardySetup(t.mu, t.nu, t.nu_hat, e, boundary);
    return HardySetup(t.mu, t.nu, e, boundary);
  }
  const WeightedMeasure mu = catalog_measure(job.mu.value_or("lebesgue"), interval);
  const WeightedMeasure nu = catalog_measure(job.nu.value_or("lebesgue"), interval);
  return HardySetup(mu, nu, e, boundary);
}

std::vector<double> grid_values(double lo, double hi, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("step must be positive");
  if (lo > hi) throw std::invalid_argument("empty range");
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> v;
  v.reserve(count);
  for (long i = 0; i < count; ++i) v.push_back(lo + static_cast<double>(i) * step);
  return v;
}

std::vector<SweepPoint> sweep_points(const JobSpec& job) {
  std::vector<SweepPoint> pts;
  if (job.diagonal) {
    if (!job.p_range) throw std::invalid_argument("--diagonal needs --p-range");
    const auto [lo, hi] = parse_range(*job.p_range);
    for (double p : grid_values(lo, hi, job.step)) pts.push_back({p, p});
    return pts;
  }
  if (!job.r_range) throw std::invalid_argument("sweep needs --r-range (or --diagonal with --p-range)");
  const auto [rlo, rhi] = parse_range(*job.r_range);
  if (rlo < 0.0) throw std::invalid_argument("r = q - p must be nonnegative");
  std::vector<double> ps{job.p};
  if (job.p_range) {
    const auto [plo, phi] = parse_range(*job.p_range);
    ps = grid_values(plo, phi, job.step);
  }
  const std::vector<double> rs = grid_values(rlo, rhi, job.step);
  for (double p : ps)
    for (double r : rs) pts.push_back({p, p + r});
  return pts;
}

std::vector<ImprovementChain> sweep_chains(const std::vector<SweepPoint>& points, Delta1Reading reading, int threads,
                                           double fault_upper_scale) {
  std::vector<ImprovementChain> rows(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        rows[i] = improvement_chain(points[i].p, points[i].q, reading);
        if (fault_upper_scale != 1.0) {
          rows[i].kB *= fault_upper_scale;
          rows[i].violations = chain_violations(rows[i]);
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int count = std::max(1, threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (int t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

std::string sweep_row(const ImprovementChain& c) {
  return fmt(c.p) + "," + fmt(c.q) + "," + fmt(c.B) + "," + fmt(c.delta1_bar) + "," + fmt(c.A_exact) + "," +
         fmt(c.A_star) + "," + fmt(c.delta1) + "," + fmt(c.kB);
}

void scale_upper(BoundsReport& r, double factor) {
  if (factor == 1.0) return;
  if (r.upper_A) *r.upper_A *= factor;
}

std::string render_report(const HardySetup& s, const BoundsReport& r) {
  std::ostringstream os;
  auto line = [&os](const std::string& key, const std::string& value, const std::string& extra = "") {
    os << key << std::string(key.size() < 12 ? 12 - key.size() : 1, ' ') << value;
    if (!extra.empty()) os << std::string(value.size() < 20 ? 20 - value.size() : 1, ' ') << extra;
    os << '\n';
  };
  const Interval& iv = s.interval();
  line("interval", "(" + fmt(iv.left) + ", " + fmt(iv.right) + ")");
  line("mu", s.mu().description());
  line("nu", s.nu().description());
  line("boundary", std::string(boundary_name(r.boundary)));
  line("p", fmt(r.p));
  line("q", fmt(r.q));
  auto argmax_of = [&r](const std::string& name) -> std::string {
    for (const auto& a : r.argmax_points) {
      if (a.quantity != name) continue;
      if (a.y) return "at (" + fmt(a.x) + ", " + fmt(*a.y) + ")";
      return "at " + fmt(a.x);
    }
    return "";
  };
  auto opt = [&](const std::string& key, const std::optional<double>& v, const std::string& arg) {
    if (v) line(key, fmt(*v), argmax_of(arg));
  };
  opt("B+", r.b_plus, "B+");
  opt("B-", r.b_minus, "B-");
  opt("B*", r.b_star, "B*");
  opt("B_*", r.b_substar, r.p == r.q ? "B*" : "B_*");
  opt("kappa", r.kappa, "kappa");
  if (r.boundary == Boundary::dirichlet_both && r.lower_A) line("kappa0", fmt(*r.lower_A), argmax_of("kappa0"));
  if (r.factor_used > 0.0) line("factor", fmt(r.factor_used));
  line("lower_A", r.lower_A ? fmt(*r.lower_A) : "none", r.lower_source);
  line("upper_A", r.upper_A ? fmt(*r.upper_A) : "none", r.upper_source);
  for (const auto& n : r.notes) os << "note: " << n << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------

int run_bounds(const JobSpec& job, std::ostream& out) {
  const HardySetup s = build_setup(job);
  BoundsReport rep = two_sided(s);
  scale_upper(rep, job.fault_upper_scale);
  out << render_report(s, rep);
  std::optional<double> oracle_value;
  if (job.oracle) {
    OracleResult o;
    if (s.exponents().linear())
      o = oracle_linear(s, job.grid_n, job.tol);
    else if (s.boundary() == Boundary::ergodic)
      o = oracle_ergodic_nonlinear(s, job.grid_n, job.tol, 20000);
    else if (s.boundary() == Boundary::dirichlet_both)
      throw HypothesisError("no oracle for two Dirichlet ends beyond p = q = 2");
    else
      o = oracle_nonlinear(s, job.grid_n, job.tol, 20000);
    oracle_value = o.A_estimate;
    out << "oracle_A" << std::string(4, ' ') << fmt(o.A_estimate) << std::string(8, ' ')
        << (o.method == OracleMethod::linear_eig ? "linear_eig" : "nonlinear_iter") << ", n = " << o.grid_size
        << (o.converged ? "" : ", not converged") << (o.lower_bound_only ? ", lower bound only" : "") << '\n';
    for (const auto& n : o.notes) out << "note: " << n << '\n';
  }
  if (!job.out.empty()) {
    std::ofstream f(job.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + job.out + "'");
    f << "boundary,p,q,b_plus,b_minus,b_star,b_substar,kappa,lower_A,upper_A,factor,oracle_A\n";
    f << boundary_name(rep.boundary) << ',' << fmt(rep.p) << ',' << fmt(rep.q) << ',' << fmt(rep.b_plus) << ','
      << fmt(rep.b_minus) << ',' << fmt(rep.b_star) << ',' << fmt(rep.b_substar) << ',' << fmt(rep.kappa) << ','
      << fmt(rep.lower_A) << ',' << fmt(rep.upper_A) << ',' << (rep.factor_used > 0 ? fmt(rep.factor_used) : "")
      << ',' << fmt(oracle_value) << '\n';
  }
  return kOk;
}

int run_exact(const JobSpec& job, std::ostream& out) {
  ImprovementChain c = improvement_chain(job.p, job.q, job.reading);
  if (job.fault_upper_scale != 1.0) {
    c.kB *= job.fault_upper_scale;
    c.violations = chain_violations(c);
  }
  out << kSweepHeader << '\n' << sweep_row(c) << '\n';
  if (!job.out.empty()) {
    std::ofstream f(job.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + job.out + "'");
    f << kSweepHeader << '\n' << sweep_row(c) << '\n';
  }
  for (const auto& v : c.violations) out << "violation: " << v << '\n';
  return c.ordered() ? kOk : kNumeric;
}

int run_sweep(const JobSpec& job, std::ostream& out) {
  const std::vector<SweepPoint> pts = sweep_points(job);
  const std::vector<ImprovementChain> rows = sweep_chains(pts, job.reading, job.threads, job.fault_upper_scale);
  std::ostringstream csv;
  csv << kSweepHeader << '\n';
  for (const auto& r : rows) csv << sweep_row(r) << '\n';
  if (job.out.empty()) {
    out << csv.str();
  } else {
    std::ofstream f(job.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + job.out + "'");
    f << csv.str();
    if (!f) throw std::runtime_error("write to '" + job.out + "' failed");
    out << "wrote " << rows.size() << " rows to " << job.out << '\n';
  }
  std::size_t bad = 0;
  for (const auto& r : rows) {
    if (r.ordered()) continue;
    if (++bad <= 10) {
      out << "ordering violated at p = " << fmt(r.p) << ", q = " << fmt(r.q) << ":";
      for (const auto& v : r.violations) out << " [" << v << "]";
      out << '\n';
    }
  }
  if (bad) {
    out << bad << " row(s) violate the ordering B <= delta1_bar <= A <= A_star <= delta1 <= kB\n";
    return kNumeric;
  }
  return kOk;
}

// ---------------------------------------------------------------------------

bool VerifyReport::passed() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const CheckResult& c) { return c.status == CheckResult::Status::fail; });
}

VerifyReport run_verify(const JobSpec& job, std::ostream& log) {
  VerifyReport rep;
  const bool quick = job.quick;
  const double fault = job.fault_upper_scale;
  const int n = quick ? 1024 : 4096;
  using Status = CheckResult::Status;
  auto record = [&](const std::string& name, Status st, const std::string& detail) {
    rep.checks.push_back({name, st, detail});
    const char* tag = st == Status::pass ? "PASS" : st == Status::fail ? "FAIL" : "WARN";
    log << tag << "  " << name << "  " << detail << '\n';
  };
  auto guarded = [&](const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      record(name, Status::fail, std::string("error: ") + e.what());
    }
  };
  auto rel = [](double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); };

  // Sandwich of the oracle between the reported bounds, p = q = 2.
  for (const CatalogEntry& entry : setup_catalog()) {
    for (Boundary b : entry.boundaries) {
      const std::string where = entry.name + "/" + std::string(boundary_name(b));
      guarded("sandwich", [&] {
        const HardySetup s = entry.make(2.0, 2.0, b);
        BoundsReport r = two_sided(s);
        scale_upper(r, fault);
        const OracleResult o = oracle_linear(s, n, 1e-10);
        const double A = o.A_estimate;
        const bool inside = *r.lower_A - 1e-6 <= A && A <= *r.upper_A + 1e-6;
        const bool ratio = *r.upper_A / *r.lower_A <= 2.0 + 1e-9;
        record("sandwich", inside && ratio ? Status::pass : Status::fail,
               where + ": A = " + fmt(A) + " in [" + fmt(*r.lower_A) + ", " + fmt(*r.upper_A) + "], ratio " +
                   fmt(*r.upper_A / *r.lower_A));
        if (const auto known = entry.known_A(b)) {
          const double slack = quick ? 1e-3 : 1e-4;
          record("oracle-accuracy", std::fabs(A - *known) <= slack ? Status::pass : Status::fail,
                 where + ": A = " + fmt(A) + " vs " + fmt(*known));
        }
      });
    }
  }

  // Model case: exact A against the one-sided Dirichlet bounds for q ≥ p.
  const std::vector<std::pair<double, double>> model = {{1.5, 3.0}, {2.0, 4.0},  {3.0, 3.0},  {5.0, 5.0},
                                                        {5.0, 15.0}, {5.0, 20.0}, {10.0, 25.0}};
  for (const auto& [p, q] : model) {
    guarded("sandwich", [&] {
      const WeightedMeasure leb = lebesgue(Interval(0.0, 1.0));
      const HardySetup s(leb, leb, Exponents(p, q), Boundary::dirichlet_left);
      BoundsReport r = two_sided(s);
      scale_upper(r, fault);
      const double A = exact_A(p, q);
      const bool inside = *r.lower_A - 1e-6 <= A && A <= *r.upper_A + 1e-6;
      record("sandwich", inside ? Status::pass : Status::fail,
             "lebesgue(0,1)/dirichlet-left (p,q) = (" + fmt(p) + "," + fmt(q) + "): exact A = " + fmt(A) + " in [" +
                 fmt(*r.lower_A) + ", " + fmt(*r.upper_A) + "]");
    });
  }

  // Ordering chain: hard on the sweep ranges, soft on the wider grid.
  guarded("chain", [&] {
    std::vector<SweepPoint> ranges;
    const std::vector<double> diag = quick ? std::vector<double>{1.05, 2.0, 30.0}
                                           : std::vector<double>{1.05, 1.5, 2.0, 3.0, 5.0, 10.0, 20.0, 30.0};
    const std::vector<double> rs = quick ? std::vector<double>{0.01, 1.0, 15.0}
                                         : std::vector<double>{0.01, 0.5, 1.0, 2.0, 5.0, 10.0, 15.0};
    for (double p : diag) ranges.push_back({p, p});
    for (double p : {2.0, 5.0})
      for (double r : rs) ranges.push_back({p, p + r});
    const auto chains = sweep_chains(ranges, job.reading, job.threads, fault);
    int bad = 0;
    std::string first;
    for (const auto& c : chains) {
      bool ok = c.ordered();
      if (c.p == c.q && std::fabs(c.A_star - c.A_exact) > 1e-10) ok = false;
      if (!ok && bad++ == 0) first = " first at (" + fmt(c.p) + "," + fmt(c.q) + ")";
    }
    record("chain", bad ? Status::fail : Status::pass,
           "sweep ranges: " + std::to_string(chains.size() - bad) + "/" + std::to_string(chains.size()) +
               " ordered" + first);
  });
  guarded("chain-grid", [&] {
    std::vector<SweepPoint> grid;
    for (double p : {1.2, 1.5, 2.0, 3.0, 5.0, 10.0, 30.0})
      for (double r : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 15.0}) grid.push_back({p, p + r});
    const auto chains = sweep_chains(grid, job.reading, job.threads, fault);
    std::string list;
    int bad = 0;
    for (const auto& c : chains)
      if (!c.ordered()) {
        ++bad;
        list += " (" + fmt(c.p) + "," + fmt(c.q) + ")";
      }
    record("chain-grid", bad ? Status::warn : Status::pass,
           bad ? std::to_string(bad) + " grid points out of order (A_star exceeds kB there):" + list
               : "all 49 grid points ordered");
  });

  // B_* ≤ B* ≤ 2^{1/p−1/q} B_*.
  guarded("isoperimetric-relation", [&] {
    const auto entries = finite_mass_catalog();
    int total = 0, bad = 0;
    std::string first;
    for (std::size_t i = 0; i < (quick ? 1 : entries.size()); ++i) {
      for (double p : {1.2, 1.5, 2.0}) {
        for (double q : {2.0, 3.0, 6.0}) {
          const HardySetup s = entries[i].make(p, q, Boundary::ergodic);
          const double star = b_star(s).value;
          const double sub = b_substar(s).value;
          const double factor = std::pow(2.0, 1.0 / p - 1.0 / q);
          ++total;
          if (!(sub <= star + 1e-9 && star <= factor * sub + 1e-9) && bad++ == 0)
            first = " first at " + entries[i].name + " (" + fmt(p) + "," + fmt(q) + ")";
        }
      }
    }
    record("isoperimetric-relation", bad ? Status::fail : Status::pass,
           std::to_string(total - bad) + "/" + std::to_string(total) + " cases" + first);
  });

  // κ₀ on (μ, ν̂) equals κ on the exchanged pair.
  guarded("duality", [&] {
    for (const char* w : {"lebesgue", "power:-0.5"}) {
      const WeightedMeasure m = catalog_measure(w, Interval(0.0, 1.0));
      const HardySetup s(m, m, Exponents(2.0, 2.0), Boundary::dirichlet_both);
      const double k0 = kappa0(s).value;
      const double k = kappa(swapped(s)).value;
      record("duality", k0 == k ? Status::pass : Status::fail,
             std::string(w) + ": kappa0 = " + fmt(k0) + ", kappa(swapped) = " + fmt(k));
    }
  });

  // Scaling covariance of the isoperimetric constants.
  guarded("scaling", [&] {
    struct Case {
      const char* weight;
      double p, q;
    };
    for (const Case& cs : {Case{"lebesgue", 2.0, 3.0}, Case{"power:-0.5", 1.5, 3.0}}) {
      const WeightedMeasure m = catalog_measure(cs.weight, Interval(0.0, 1.0));
      const Exponents e(cs.p, cs.q);
      const HardySetup base(m, m, e, Boundary::ergodic);
      auto values = [](const HardySetup& s) {
        return std::array<double, 4>{b_plus(s).value, b_minus(s).value, b_star(s).value, b_substar(s).value};
      };
      const auto v0 = values(base);
      double worst = 0.0;
      for (double c : {0.5, 4.0}) {
        const auto vm = values(HardySetup(m.scaled(c), m, e, Boundary::ergodic));
        const auto vn = values(HardySetup(m, m.scaled(c), e, Boundary::ergodic));
        for (int i = 0; i < 4; ++i) {
          worst = std::max(worst, rel(vm[i], v0[i] * std::pow(c, 1.0 / cs.q)));
          worst = std::max(worst, rel(vn[i], v0[i] * std::pow(c, -1.0 / cs.p)));
        }
      }
      record("scaling", worst <= 1e-8 ? Status::pass : Status::fail,
             std::string(cs.weight) + " (p,q) = (" + fmt(cs.p) + "," + fmt(cs.q) + "): worst relative deviation " +
                 fmt(worst));
    }
  });

  // κ does not depend on the reference point of the elliptic construction.
  guarded("theta-invariance", [&] {
    struct Case {
      const char* a;
      const char* b;
      Interval interval;
      std::vector<double> thetas;
    };
    const std::vector<Case> cases = {
        {"1", "-x", Interval(-kInf, kInf), {0.0, 1.0, -0.5}},
        {"1", "1", Interval(0.0, 1.0), {0.25, 0.5, 0.9}},
        {"1 + x^2", "-x", Interval(0.0, 2.0), {0.5, 1.5}},
    };
    for (const Case& cs : cases) {
      std::vector<double> ks;
      for (double th : cs.thetas) {
        const MeasureTriple t = measures_from_elliptic({parse(cs.a), parse(cs.b), th}, cs.interval);
        ks.push_back(kappa(HardySetup(t.mu, t.nu, t.nu_hat, Exponents(2.0, 2.0), Boundary::ergodic)).value);
      }
      double worst = 0.0;
      for (double k : ks) worst = std::max(worst, rel(k, ks.front()));
      record("theta-invariance", worst <= 1e-8 ? Status::pass : Status::fail,
             std::string("a = ") + cs.a + ", b = " + cs.b + ": kappa = " + fmt(ks.front()) + ", spread " + fmt(worst));
    }
  });

  // Agreement between the independent oracles.
  guarded("oracle-agreement", [&] {
    for (const CatalogEntry& entry : setup_catalog()) {
      for (Boundary b : entry.boundaries) {
        if (b != Boundary::dirichlet_left && b != Boundary::dirichlet_right) continue;
        const HardySetup s = entry.make(2.0, 2.0, b);
        const double lin = oracle_linear(s, n, 1e-10).A_estimate;
        const OracleResult non = oracle_nonlinear(s, n, 1e-8, 20000);
        const bool ok = std::fabs(lin - non.A_estimate) <= 1e-3 && non.converged;
        record("oracle-agreement", ok ? Status::pass : Status::fail,
               entry.name + "/" + std::string(boundary_name(b)) + ": linear " + fmt(lin) + ", nonlinear " +
                   fmt(non.A_estimate));
      }
    }
    const WeightedMeasure leb = lebesgue(Interval(0.0, 1.0));
    const HardySetup erg(leb, leb, Exponents(2.0, 2.0), Boundary::ergodic);
    const double lin = oracle_linear(erg, n, 1e-10).A_estimate;
    const double asc = oracle_ergodic_nonlinear(erg, 1024, 1e-8, 20000).A_estimate;
    record("oracle-agreement", std::fabs(lin - asc) <= 1e-3 ? Status::pass : Status::fail,
           "lebesgue(0,1)/ergodic: linear " + fmt(lin) + ", ascent " + fmt(asc));
    for (const auto& [p, q] : std::vector<std::pair<double, double>>{{2, 2}, {3, 3}, {5, 5}, {2, 4}}) {
      const HardySetup s(leb, leb, Exponents(p, q), Boundary::dirichlet_left);
      const OracleResult o = oracle_nonlinear(s, n, 1e-8, 20000);
      const double A = exact_A(p, q);
      record("oracle-agreement", std::fabs(o.A_estimate - A) <= 1e-3 && o.converged ? Status::pass : Status::fail,
             "nonlinear vs exact A at (" + fmt(p) + "," + fmt(q) + "): " + fmt(o.A_estimate) + " vs " + fmt(A));
    }
  });

  // Soft: the improved estimates tighten for larger p at r = 10.
  guarded("trend", [&] {
    auto gap = [&](double p) {
      const ImprovementChain c = improvement_chain(p, p + 10.0, job.reading);
      return (c.delta1 - c.delta1_bar) / c.A_exact;
    };
    const double g2 = gap(2.0), g5 = gap(5.0);
    record("trend", g5 < g2 ? Status::pass : Status::warn,
           "relative gap (delta1 - delta1_bar)/A at r = 10: p = 2 " + fmt(g2) + ", p = 5 " + fmt(g5));
  });

  return rep;
}

int run_verify_command(const JobSpec& job, std::ostream& out) {
  const VerifyReport rep = run_verify(job, out);
  int fails = 0, warns = 0;
  std::string failed;
  for (const auto& c : rep.checks) {
    if (c.status == CheckResult::Status::fail) {
      if (failed.find(c.name) == std::string::npos) failed += (failed.empty() ? "" : ", ") + c.name;
      ++fails;
    }
    if (c.status == CheckResult::Status::warn) ++warns;
  }
  out << rep.checks.size() << " checks, " << fails << " failed, " << warns << " warnings\n";
  if (fails) {
    out << "verify failed: " << failed << '\n';
    return kVerifyFailed;
  }
  return kOk;
}

// ---------------------------------------------------------------------------

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{
      "Two-sided estimates of the optimal constant in weighted Hardy inequalities.\n\n"
      "Densities and coefficients are expressions in x: numbers, x, + - * / ^ (right\n"
      "associative, binds tighter than unary minus), parentheses and exp, log, sin,\n"
      "cos, sqrt, abs, pow(a, b). Catalog names: lebesgue, gauss, power:<alpha>.",
      "hardy"};
  app.fallthrough();
  app.require_subcommand(1);

  JobSpec job;
  std::string boundary = job.boundary;
  std::string reading = "B";
  app.set_config("--job", "", "Read options from a key = value job file (flags override it)");
  app.add_option("--p", job.p, "Exponent p in (1, inf)");
  app.add_option("--q", job.q, "Exponent q in (1, inf)");
  app.add_option("--interval", job.interval, "Interval a,b (use -inf / inf for infinite ends)");
  app.add_option("--mu", job.mu, "Measure mu: catalog name or density expression");
  app.add_option("--nu", job.nu, "Measure nu: catalog name or density expression");
  app.add_option("--a", job.a, "Elliptic diffusion coefficient a(x) > 0");
  app.add_option("--b", job.b, "Elliptic drift coefficient b(x)");
  app.add_option("--theta", job.theta, "Reference point of the elliptic construction");
  app.add_option("--boundary", boundary, "ergodic, dirichlet-left, dirichlet-right or dirichlet-both");
  app.add_flag("--diagonal", job.diagonal, "Sweep q = p over --p-range");
  app.add_option("--p-range", job.p_range, "Sweep range lo,hi for p");
  app.add_option("--r-range", job.r_range, "Sweep range lo,hi for r = q - p");
  app.add_option("--step", job.step, "Sweep step");
  app.add_option("--out", job.out, "Output CSV path");
  app.add_option("--tol", job.tol, "Oracle tolerance");
  app.add_option("--grid-n", job.grid_n, "Oracle grid size");
  app.add_option("--delta1-reading", reading, "Exponent reading for delta1: A or B");
  app.add_flag("--quick", job.quick, "Run the reduced verification suite");
  app.add_flag("--oracle", job.oracle, "Also run the numerical oracle (bounds)");
  app.add_option("--threads", job.threads, "Worker threads for sweeps (0 = hardware)");
  app.add_option("--fault-upper-scale", job.fault_upper_scale)->group("");

  auto* c_bounds = app.add_subcommand("bounds", "Isoperimetric constants and two-sided estimates of A");
  auto* c_exact = app.add_subcommand("exact", "Closed-form chain for the Lebesgue model case");
  auto* c_sweep = app.add_subcommand("sweep", "CSV sweep of the chain over p or r = q - p");
  auto* c_verify = app.add_subcommand("verify", "Cross-module verification suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    job.boundary = boundary;
    static_cast<void>(parse_boundary(boundary));
    job.reading = parse_reading(reading);
    if (c_bounds->parsed()) return run_bounds(job, out);
    if (c_exact->parsed()) return run_exact(job, out);
    if (c_sweep->parsed()) return run_sweep(job, out);
    if (c_verify->parsed()) return run_verify_command(job, out);
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::logic_error& e) {
    err << "invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumeric;
  }
  return kUsage;
}

}  // namespace hardy::cli
