#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sbwehrl::verify {

struct CheckResult {
  std::string check_name;
  bool passed = false;
  double max_discrepancy = 0.0;
  double tolerance = 0.0;
};

struct Options {
  std::uint64_t seed = 0x5eedULL;
  long long mc_samples = 1'000'000;
  int base_order = 24;
  // Overrides; negative means "use the built-in default".
  double tol_entropy = -1.0;
  double tol_algebra = -1.0;
  double tol_observables = -1.0;
  double mc_sigma = -1.0;
};

// Runs the full invariant suite: operator algebra, vacuum annihilation,
// orthonormality, observable closed forms, entropy analytic-vs-numeric,
// Gauss-Hermite vs Monte Carlo.
std::vector<CheckResult> run_all(const Options& opts);

}  // namespace sbwehrl::verify
