#pragma once

// Built-in setups used by the verification suite and the acceptance tests.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hardy/bounds.hpp"

namespace hardy {

struct CatalogEntry {
  std::string name;
  std::function<HardySetup(double p, double q, Boundary b)> make;
  /// Boundary kinds for which the setup is non-degenerate.
  std::vector<Boundary> boundaries;
  /// Known optimal constant for p = q = 2 per boundary kind, when closed form.
  std::function<std::optional<double>(Boundary)> known_A;
};

std::vector<CatalogEntry> setup_catalog();

/// The five measure pairs used by grid invariants (all with finite μ):
/// Lebesgue, x^{−1/2}, x on (0, 1), Gaussian and elliptic OU on the line.
std::vector<CatalogEntry> finite_mass_catalog();

}  // namespace hardy
