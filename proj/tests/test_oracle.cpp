#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

#include "hardy/catalog.hpp"
#include "hardy/exact.hpp"
#include "hardy/oracle.hpp"

using namespace hardy;

namespace {

HardySetup lebesgue_setup(double p, double q, Boundary b) {
  const WeightedMeasure m = lebesgue(Interval(0.0, 1.0));
  return HardySetup(m, m, Exponents(p, q), b);
}

// Eigenvalues of the pencil by a dense generalized solver.
Eigen::VectorXd dense_eigenvalues(const LinearPencil& pencil) {
  const Eigen::Index n = pencil.diagonal.size();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  K.diagonal() = pencil.diagonal;
  for (Eigen::Index i = 0; i + 1 < n; ++i) K(i, i + 1) = K(i + 1, i) = pencil.off_diagonal(i);
  const Eigen::MatrixXd M = pencil.mass.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(K, M);
  return solver.eigenvalues();
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("Sturm bisection agrees with a dense solver") {
    for (const CatalogEntry& entry : setup_catalog()) {
      for (Boundary b : entry.boundaries) {
        const HardySetup s = entry.make(2, 2, b);
        const int n = 64;
        const Discretization d = discretize(s, n);
        const LinearPencil pencil = assemble_linear(d, b);
        const Eigen::VectorXd ev = dense_eigenvalues(pencil);
        const double lambda = b == Boundary::ergodic ? ev(1) : ev(0);
        const OracleResult o = oracle_linear(s, n, 1e-12);
        CAPTURE(entry.name);
        CAPTURE(boundary_name(b));
        CHECK(o.A_estimate == doctest::Approx(1.0 / std::sqrt(lambda)).epsilon(1e-9));
        for (int k = 0; k < 5; ++k) {
          // Tail modes of the line setups come in near-degenerate pairs.
          if (ev(k + 1) - ev(k) <= 1e-9 * ev(k + 1)) continue;
          CHECK(sturm_count(pencil, 0.5 * (ev(k) + ev(k + 1))) == k + 1);
        }
      }
    }
  }

  TEST_CASE("classical eigenvalues") {
    const double pi = std::numbers::pi;
    CHECK(oracle_linear(lebesgue_setup(2, 2, Boundary::ergodic), 4096, 1e-10).A_estimate ==
          doctest::Approx(1 / pi).epsilon(1e-6));
    CHECK(oracle_linear(lebesgue_setup(2, 2, Boundary::dirichlet_left), 4096, 1e-10).A_estimate ==
          doctest::Approx(2 / pi).epsilon(1e-6));
    CHECK(oracle_linear(lebesgue_setup(2, 2, Boundary::dirichlet_right), 4096, 1e-10).A_estimate ==
          doctest::Approx(2 / pi).epsilon(1e-6));
    CHECK(oracle_linear(lebesgue_setup(2, 2, Boundary::dirichlet_both), 4096, 1e-10).A_estimate ==
          doctest::Approx(1 / pi).epsilon(1e-6));
  }

  TEST_CASE("second-order mesh convergence") {
    const HardySetup s = lebesgue_setup(2, 2, Boundary::ergodic);
    double prev = 0.0;
    for (int n : {256, 512, 1024}) {
      const double err = std::fabs(oracle_linear(s, n, 1e-12).A_estimate - 1 / std::numbers::pi);
      if (prev > 0.0) {
        CHECK(prev / err > 3.5);
        CHECK(prev / err < 4.5);
      }
      prev = err;
    }
  }

  TEST_CASE("eigenvector and Rayleigh quotient") {
    const OracleResult o = oracle_linear(lebesgue_setup(2, 2, Boundary::dirichlet_left), 1024, 1e-12);
    CHECK(o.eigenvector.size() == o.nodes.size());
    CHECK(o.rayleigh == doctest::Approx(1 / (o.A_estimate * o.A_estimate)).epsilon(1e-8));
    // The extremal is sin(πx/2), monotone on (0, 1).
    for (Eigen::Index i = 1; i < o.eigenvector.size(); ++i)
      CHECK(std::fabs(o.eigenvector(i)) >= std::fabs(o.eigenvector(i - 1)));
  }

  TEST_CASE("nonlinear iteration reproduces exact constants") {
    for (auto [p, q] : {std::pair{2.0, 2.0}, {3.0, 3.0}, {2.0, 4.0}}) {
      const OracleResult o = oracle_nonlinear(lebesgue_setup(p, q, Boundary::dirichlet_left), 1024, 1e-9, 20000);
      CAPTURE(p);
      CAPTURE(q);
      CHECK(o.converged);
      CHECK_FALSE(o.lower_bound_only);
      CHECK(o.A_estimate == doctest::Approx(exact_A(p, q)).epsilon(1e-4));
    }
    const OracleResult r = oracle_nonlinear(lebesgue_setup(2, 4, Boundary::dirichlet_right), 1024, 1e-9, 20000);
    CHECK(r.A_estimate == doctest::Approx(exact_A(2, 4)).epsilon(1e-4));
  }

  TEST_CASE("q < p gives a lower bound by ascent") {
    const OracleResult o = oracle_nonlinear(lebesgue_setup(3, 2, Boundary::dirichlet_left), 512, 1e-8, 20000);
    CHECK(o.lower_bound_only);
    CHECK(o.A_estimate > 0.0);
    const BoundsReport r = two_sided(lebesgue_setup(3, 2, Boundary::dirichlet_left));
    CHECK(o.A_estimate >= *r.lower_A - 1e-6);
  }

  TEST_CASE("ergodic ascent matches the linear oracle") {
    const HardySetup s = lebesgue_setup(2, 2, Boundary::ergodic);
    const OracleResult o = oracle_ergodic_nonlinear(s, 1024, 1e-9, 20000);
    CHECK(o.A_estimate == doctest::Approx(1 / std::numbers::pi).epsilon(1e-3));
    CHECK(o.A_estimate >= 0.25 - 1e-6);
    CHECK(o.A_estimate <= 0.5 + 1e-6);
  }

  TEST_CASE("grid size validation") { CHECK_THROWS(discretize(lebesgue_setup(2, 2, Boundary::ergodic), 8)); }
}
