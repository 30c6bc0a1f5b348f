#pragma once

// Command-line front end: `bounds`, `exact`, `sweep` and `verify`.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hardy/bounds.hpp"
#include "hardy/exact.hpp"

namespace hardy::cli {

enum class Command { bounds, exact, sweep, verify };

enum ExitCode : int { kOk = 0, kUsage = 2, kNumeric = 3, kVerifyFailed = 4 };

struct JobSpec {
  Command command = Command::bounds;
  double p = 2.0;
  double q = 2.0;
  std::string interval = "0,1";
  std::optional<std::string> mu;
  std::optional<std::string> nu;
  std::optional<std::string> a;
  std::optional<std::string> b;
  std::optional<double> theta;
  std::string boundary = "ergodic";
  bool diagonal = false;
  std::optional<std::string> p_range;
  std::optional<std::string> r_range;
  double step = 0.05;
  std::string out;
  double tol = 1e-8;
  int grid_n = 4096;
  Delta1Reading reading = Delta1Reading::B;
  bool quick = false;
  bool oracle = false;
  int threads = 0;
  /// Test hook: multiplies every reported upper bound (and the chain's kB).
  double fault_upper_scale = 1.0;
};

/// "a,b" with `-inf` / `inf` allowed.
Interval parse_interval(const std::string& text);
/// "lo,hi" with lo ≤ hi.
std::pair<double, double> parse_range(const std::string& text);

/// Checks the measure-source rules and builds the setup.
HardySetup build_setup(const JobSpec& job);

/// Values lo, lo + step, … up to hi (inclusive within 1e-9·step).
std::vector<double> grid_values(double lo, double hi, double step);

struct SweepPoint {
  double p;
  double q;
};
std::vector<SweepPoint> sweep_points(const JobSpec& job);

/// Chains for all points, computed by a worker pool and returned in grid order.
std::vector<ImprovementChain> sweep_chains(const std::vector<SweepPoint>& points, Delta1Reading reading,
                                           int threads, double fault_upper_scale = 1.0);

inline constexpr const char* kSweepHeader = "p,q,B,delta1_bar,A,A_star,delta1,kB";
std::string sweep_row(const ImprovementChain& c);

/// Text rendering of a report (12 significant digits).
std::string render_report(const HardySetup& s, const BoundsReport& r);
/// Applies the fault hook to a report.
void scale_upper(BoundsReport& r, double factor);

struct CheckResult {
  enum class Status { pass, fail, warn };
  std::string name;
  Status status = Status::pass;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

VerifyReport run_verify(const JobSpec& job, std::ostream& log);

/// Runs one command; returns the exit code.
int run_bounds(const JobSpec& job, std::ostream& out);
int run_exact(const JobSpec& job, std::ostream& out);
int run_sweep(const JobSpec& job, std::ostream& out);
int run_verify_command(const JobSpec& job, std::ostream& out);

/// Full entry point: parses flags and an optional `--job` file (flags win).
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hardy::cli
