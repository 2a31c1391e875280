#pragma once

#include <optional>
#include <vector>

#include "mms/instance.hpp"

namespace mms {

/// Output shared by the bag-filling algorithms.
struct AlgorithmResult {
  Allocation allocation;
  /// Threshold base each agent was served against; empty when the agent was
  /// served by a trivial case that never computes one.
  std::vector<std::optional<Rational>> mu_hat;
  /// Number of valid reductions applied before the main routine.
  int reductions = 0;
};

}  // namespace mms
