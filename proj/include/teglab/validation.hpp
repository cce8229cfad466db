#pragma once

#include <string>
#include <vector>

namespace teglab::validation {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Oracle and identity checks at desk scale: CSI vs quadrature, digit
/// extraction, the golden paths M = 11 and 26, path counts, prefactor completeness,
/// enumeration vs lattice DP, the V = 0 closed form, Stirling and de Moivre.
/// Deterministic (fixed seeds).
std::vector<SuiteResult> run_all();

}  // namespace teglab::validation
