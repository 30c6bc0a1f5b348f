#pragma once

// Independent numerical estimates of the optimal constant A.
//
// The interval is cut into n cells equidistributed in the reference
// coordinate; unknowns sit at cell centres. Cell masses come from μ and the
// link between neighbouring centres carries the ν̂-mass between them, which is
// the exact minimal energy of a monotone link for ∫|f′|^p dν. A Dirichlet end
// adds a link to the boundary. Cells of negligible μ-mass are condensed: their
// links combine in series.

#include <Eigen/Core>

#include <string>
#include <vector>

#include "hardy/bounds.hpp"

namespace hardy {

enum class OracleMethod { linear_eig, nonlinear_iter };

struct OracleResult {
  double A_estimate = 0.0;
  OracleMethod method = OracleMethod::linear_eig;
  int grid_size = 0;
  int iterations = 0;
  double residual = 0.0;  ///< last relative change
  bool converged = false;
  /// Produced by ascent alone (q < p or the ergodic case); only a lower bound on A.
  bool lower_bound_only = false;
  /// Linear case: A⁻² recomputed as the Rayleigh quotient of `eigenvector`.
  double rayleigh = 0.0;
  /// Nodal values on the active nodes, in interval order.
  Eigen::VectorXd eigenvector;
  /// x positions of the active nodes.
  Eigen::VectorXd nodes;
  std::vector<std::string> notes;
};

/// Discretized problem: masses of the active nodes, ν̂-weights of the links
/// between consecutive active nodes, and boundary links (+inf when absent).
struct Discretization {
  Eigen::VectorXd nodes;
  Eigen::VectorXd mass;
  Eigen::VectorXd link;  ///< size mass.size() − 1
  double left_link = 0.0;
  double right_link = 0.0;
};

Discretization discretize(const HardySetup& s, int n);

/// Tridiagonal stiffness (diagonal, off-diagonal) of the p = 2 pencil K − λM.
struct LinearPencil {
  Eigen::VectorXd diagonal;
  Eigen::VectorXd off_diagonal;
  Eigen::VectorXd mass;
};

LinearPencil assemble_linear(const Discretization& d, Boundary boundary);

/// Number of eigenvalues of K − λM below λ, from the LDLᵀ pivots.
int sturm_count(const LinearPencil& pencil, double lambda);

/// p = q = 2: A = λ^{−1/2} with λ the second smallest eigenvalue (ergodic)
/// or the smallest (Dirichlet kinds), found by Sturm bisection.
OracleResult oracle_linear(const HardySetup& s, int n, double tol);

/// Dirichlet left or right, general (p, q): two-integral fixed point checked
/// by preconditioned gradient ascent from three seeded random starts.
OracleResult oracle_nonlinear(const HardySetup& s, int n, double tol, int max_iter);

/// Ergodic, general (p, q): gradient ascent on ‖f − π(f)‖_q / ‖f′‖_p with
/// re-centering, three seeded starts.
OracleResult oracle_ergodic_nonlinear(const HardySetup& s, int n, double tol, int max_iter);

/// Seeds of the random starts.
inline constexpr unsigned long long kOracleSeeds[3] = {12345ULL, 67890ULL, 24680ULL};

}  // namespace hardy
