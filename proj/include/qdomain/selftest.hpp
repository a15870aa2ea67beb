#pragma once

#include <string>
#include <vector>

#include "qdomain/io.hpp"

namespace qdomain {

struct SelftestCheck {
  std::string name;
  double error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct SelftestReport {
  std::vector<SelftestCheck> checks;
  bool passed = true;
  /// Name of the first failing check, empty when all pass.
  std::string first_failure;

  std::string table() const;
};

/// Operator identities at the configured resolution: K eigenvalues, fast vs
/// direct balayage, Fubini pairing, Poisson moments, Green and area cross-checks.
SelftestReport run_selftest(const RunConfig& cfg);

}  // namespace qdomain
