#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "toroid/greens.hpp"

namespace toroid {

struct ValidationConfig {
  double a = 5.0;
  double b = 1.0;
  TruncationPolicy policy{};
  int n_panels = 400;
  std::uint64_t seed = 20240611;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;   // worst error observed
  double threshold = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  double seconds = 0.0;

  bool all_passed() const noexcept;
};

/// Cross-check battery: expansion identity, grounded surface residual,
/// BEM against the series, analytic mixed derivative against finite
/// differences and BEM, force against the energy slope, far-field power law.
ValidationReport run_validation(const ValidationConfig& cfg);

}  // namespace toroid
