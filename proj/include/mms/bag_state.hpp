#pragma once

#include <functional>
#include <vector>

#include "mms/instance.hpp"

namespace mms {

/// Bags B_1..B_t of the single-category bag-filling algorithms.
struct BagState {
  int t = 0;
  /// bags[k - 1] is B_k, as sorted item ids.
  std::vector<Bundle> bags;
  /// Agents not yet served, ascending.
  std::vector<int> remaining_agents;
  /// Indexed by agent id of the instance the state belongs to.
  std::vector<Rational> mu_hat;
  /// bag_sizes[k - 1] is b_k from initialization.
  std::vector<int> bag_sizes;
};

/// One move or swap inside a round of the main loop.
struct BagStep {
  int t = 0;
  int k = 0;
  bool swap = false;
  /// B after the update.
  Bundle bag;
  /// B_k^(t-1) after the update.
  Bundle other;
};

struct BagFillingOptions {
  /// Evaluate the round invariants at every round boundary and throw
  /// InternalInvariantError on the first violation.
  bool check_invariants = false;
  /// Called at every round boundary with the instance of the current
  /// recursion level, the state and the bundles assigned so far at that level.
  std::function<void(const Instance&, const BagState&, const std::vector<Bundle>&)> on_round;
  /// Called after every move or swap.
  std::function<void(const Instance&, const BagStep&)> on_step;
};

}  // namespace mms
