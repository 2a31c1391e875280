#pragma once

#include <functional>
#include <optional>
#include <string>

#include "mms/algorithm.hpp"
#include "mms/single_goods.hpp"

namespace mms {

/// n / (2n - 1), with n replaced by 1 when n = 0.
Rational default_alpha_categorized_goods(int n);
/// (2n - 1) / n, with n replaced by 1 when n = 0.
Rational default_alpha_categorized_chores(int n);

/// Items g^{C*}_j with d(n-1) < j <= dn+1, plus max{q-_C, |C| - q+_C (n-1)}
/// least valuable items of every category (d+1 fewer for C*), given to
/// `agent`. Requires an ordered goods instance with |C*| >= dn + 1.
ReductionResult valid_reduction_bundle(const Instance& inst, int agent, int category, int d);

/// Round state of the categorized bag-filling algorithms.
struct CategorizedState {
  int t = 0;
  /// M^(t), sorted item ids.
  std::vector<int> remaining_items;
  std::vector<int> remaining_agents;
  std::vector<Rational> mu_hat;
};

struct CategorizedOptions {
  bool check_invariants = false;
  std::function<void(const Instance&, const CategorizedState&, const std::vector<Bundle>&)> on_round;
  /// Called with the state of round t and the bag about to be assigned.
  std::function<void(const Instance&, const CategorizedState&, const Bundle&)> on_assign;
};

/// Conditions C1 to C4 of the categorized goods loop; returns the first violated label.
std::optional<std::string> check_invariants_categorized_goods(const Instance& inst, const CategorizedState& state,
                                                              const std::vector<Bundle>& assigned,
                                                              const Rational& alpha);
std::optional<std::string> check_invariants_categorized_chores(const Instance& inst, const CategorizedState& state,
                                                               const std::vector<Bundle>& assigned,
                                                               const Rational& alpha);

/// floor(|C n M^t| / t) <= |B n C| <= ceil(|C n M^t| / t) for every category.
bool bag_within_bounds(const Instance& inst, const CategorizedState& state, const Bundle& bag);

AlgorithmResult approx_categorized_goods(const Instance& inst, const Rational& alpha,
                                         const CategorizedOptions& options = {});
AlgorithmResult approx_categorized_goods(const Instance& inst);

AlgorithmResult approx_categorized_chores(const Instance& inst, const Rational& alpha,
                                          const CategorizedOptions& options = {});
AlgorithmResult approx_categorized_chores(const Instance& inst);

}  // namespace mms
