#pragma once

#include <string>
#include <vector>

#include "remis/gridwalk.hpp"

namespace remis {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Analytic invariant battery over a Gridwalk instance: exact-solver
/// residuals, closed-form dual stationarity, the coverage bound, population
/// identification, strong convexity, and the doubly robust identities.
/// Every check is deterministic given the seed.
std::vector<CheckResult> run_invariant_suite(const GridwalkConfig& cfg,
                                             std::uint64_t seed = 2024);

}  // namespace remis
