#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "hardy/cli.hpp"

namespace cli = hardy::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"hardy"};
  argv.insert(argv.end(), args);
  std::ostringstream out, err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path temp_path(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

bool has(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("bounds reports") {
    const Run erg = run({"bounds", "--p", "2", "--q", "2", "--interval", "0,1", "--mu", "lebesgue", "--nu",
                         "lebesgue", "--boundary", "ergodic"});
    CHECK(erg.code == 0);
    CHECK(has(erg.out, "lower_A     0.25 "));
    CHECK(has(erg.out, "upper_A     0.5 "));
    const Run dir = run({"bounds", "--boundary", "dirichlet-left"});
    CHECK(dir.code == 0);
    CHECK(has(dir.out, "lower_A     0.5 "));
    CHECK(has(dir.out, "upper_A     1 "));
  }

  TEST_CASE("elliptic source reproduces the Lebesgue report") {
    auto numbers_only = [](const std::string& text) {
      std::istringstream in(text);
      std::string line, kept;
      while (std::getline(in, line))
        if (line.rfind("mu ", 0) != 0 && line.rfind("nu ", 0) != 0) kept += line + "\n";
      return kept;
    };
    const Run a = run({"bounds", "--a", "1", "--b", "0", "--theta", "0.5"});
    const Run b = run({"bounds", "--mu", "lebesgue", "--nu", "lebesgue"});
    CHECK(a.code == 0);
    CHECK(numbers_only(a.out) == numbers_only(b.out));
  }

  TEST_CASE("exact rows") {
    const Run r = run({"exact", "--p", "2", "--q", "2"});
    CHECK(r.code == 0);
    CHECK(has(r.out, "2,2,0.5,0.612372435696,0.636619772368,0.636619772368,0.653830243006,1\n"));
    CHECK(has(run({"exact", "--p", "3", "--q", "3"}).out, ",0.65638505143,"));
    CHECK(has(run({"exact", "--p", "2", "--q", "4"}).out, ",0.709827942242,"));
    CHECK(has(run({"exact", "--delta1-reading", "A"}).out, ",0.721485828296,"));
  }

  TEST_CASE("sweeps are byte-stable and ordered") {
    const auto one = temp_path("hardy_sweep_1.csv"), two = temp_path("hardy_sweep_2.csv");
    const std::string a = one.string(), b = two.string();
    CHECK(run({"sweep", "--p", "2", "--r-range", "0.01,3", "--step", "0.07", "--threads", "1", "--out", a.c_str()})
              .code == 0);
    CHECK(run({"sweep", "--p", "2", "--r-range", "0.01,3", "--step", "0.07", "--threads", "3", "--out", b.c_str()})
              .code == 0);
    const std::string csv = slurp(one);
    CHECK(csv == slurp(two));
    CHECK(csv.rfind("p,q,B,delta1_bar,A,A_star,delta1,kB\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 44);
    std::filesystem::remove(one);
    std::filesystem::remove(two);
  }

  TEST_CASE("diagonal sweep has A_star equal to A") {
    const Run r = run({"sweep", "--diagonal", "--p-range", "1.05,30", "--step", "1"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
      std::vector<double> v;
      std::istringstream cells(line);
      std::string cell;
      while (std::getline(cells, cell, ',')) v.push_back(std::stod(cell));
      REQUIRE(v.size() == 8);
      CHECK(v[4] == v[5]);
      ++rows;
    }
    CHECK(rows == 29);
  }

  TEST_CASE("grid values") {
    const auto g = cli::grid_values(0.01, 15.0, 0.01);
    CHECK(g.size() == 1500);
    CHECK(g.back() == doctest::Approx(15.0));
    CHECK_THROWS(cli::grid_values(0.0, 1.0, 0.0));
    CHECK_THROWS(cli::parse_range("2,1"));
    CHECK(std::isinf(cli::parse_interval("-inf, inf").left));
  }

  TEST_CASE("exit codes") {
    CHECK(run({}).code == cli::kUsage);
    CHECK(run({"bounds", "--p", "0.5"}).code == cli::kUsage);
    CHECK(run({"bounds", "--mu", "lebesgue", "--a", "1", "--b", "0"}).code == cli::kUsage);
    CHECK(run({"bounds", "--mu", "log(x"}).code == cli::kUsage);
    CHECK(run({"bounds", "--boundary", "sideways"}).code == cli::kUsage);
    CHECK(run({"sweep", "--p", "2"}).code == cli::kUsage);
    CHECK(run({"bounds", "--interval", "0,inf"}).code == cli::kUsage);
    CHECK(run({"sweep", "--p", "2", "--r-range", "0.5,1", "--out", "/nonexistent/dir/x.csv"}).code == cli::kNumeric);
    CHECK(run({"--help"}).code == cli::kOk);
  }

  TEST_CASE("job files with flag overrides") {
    const auto path = temp_path("hardy_job.ini");
    {
      std::ofstream f(path);
      f << "p = 2\nq = 4\ndelta1-reading = B\n";
    }
    const std::string job = path.string();
    CHECK(has(run({"exact", "--job", job.c_str()}).out, "\n2,4,"));
    CHECK(has(run({"exact", "--job", job.c_str(), "--q", "3"}).out, "\n2,3,"));
    {
      std::ofstream f(path);
      f << "p = 2\nr-range = \"0.5,1\"\nstep = 0.25\n";
    }
    const Run r = run({"sweep", "--job", job.c_str()});
    CHECK(r.code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);
    std::filesystem::remove(path);
  }

  TEST_CASE("verify passes and the fault hook is caught") {
    const Run ok = run({"verify", "--quick"});
    CHECK(ok.code == cli::kOk);
    const Run bad = run({"verify", "--quick", "--fault-upper-scale", "0.9"});
    CHECK(bad.code == cli::kVerifyFailed);
    CHECK(has(bad.out, "FAIL  sandwich"));
    CHECK(has(bad.out, "verify failed: sandwich"));
  }
}
