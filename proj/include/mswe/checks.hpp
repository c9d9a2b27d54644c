#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mswe {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// E21 E10 = 0, 1^T E21 = 0 and E10 1 = 0 in integer arithmetic for every
/// degree up to max_p on every mesh up to max_n x max_n.
std::vector<CheckResult> topology_checks(int max_p = 4, int max_n = 4);

/// Symmetry and definiteness of the mass and coupling matrices, and the
/// skew-energy identity F^T U^q F = 0, at n_states random states.
std::vector<CheckResult> symmetry_checks(std::uint64_t seed, int n_states = 20);

/// Everything `mswe check` runs.
std::vector<CheckResult> invariant_suite(std::uint64_t seed);

}  // namespace mswe
