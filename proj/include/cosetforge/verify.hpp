#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cosetforge {

/// One checked property: the suite that ran it, what was measured, whether it
/// held, and a short account of the measurement (worst gap, counterexample,
/// observed rate).
struct PropertyCheck {
  std::string suite;
  std::string property;
  bool passed = false;
  std::string detail;
};

/// The suite names run_verify_suite accepts, in canonical run order.
const std::vector<std::string>& verify_suite_names();

/// Runs one named suite, or every suite in order for "all". Stochastic checks
/// derive their generators from `seed`, so reruns with the same seed
/// reproduce every detail string byte for byte. Unknown names raise
/// SuiteUnknown.
std::vector<PropertyCheck> run_verify_suite(const std::string& suite, uint64_t seed);

}  // namespace cosetforge
