#pragma once

#include <optional>
#include <string>

#include "mms/algorithm.hpp"
#include "mms/bag_state.hpp"

namespace mms {

/// 2n / (3n - 1), with n replaced by 1 when n = 0.
Rational default_alpha_goods(int n);

/// Initial bags B_k^(n) with b_k = min{q+, m - sum_{k'>k} b_k' - (k-1) max{q-, 1}}.
/// Requires a single-category instance with m > n.
BagState init_bags_goods(const Instance& inst);

/// min over r of v_i(B_r u ... u B_n) / (n - r + 1), for every agent.
std::vector<Rational> mu_hat_goods(const Instance& inst, const BagState& state);

struct ReductionResult {
  /// Bundle given to the reducing agent, sorted item ids of the parent instance.
  Bundle bundle;
  SubInstance reduced;
};

/// Gives {g_n, g_{n+1}} plus the least valuable tail items to agent i*.
/// Throws PreconditionError unless v_{i*}({g_n, g_{n+1}}) >= alpha * mu_hat_{i*}.
ReductionResult valid_reduction_goods(const Instance& inst, int agent, const Rational& alpha);

/// Returns the label ("C1".."C6") of the first violated round condition.
std::optional<std::string> check_invariants_goods(const Instance& inst, const BagState& state,
                                                  const std::vector<Bundle>& assigned, const Rational& alpha);

/// Bag-filling with valid reductions for ordered single-category goods.
AlgorithmResult approx_goods(const Instance& inst, const Rational& alpha, const BagFillingOptions& options = {});
AlgorithmResult approx_goods(const Instance& inst);

}  // namespace mms
