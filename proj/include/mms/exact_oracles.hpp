#pragma once

#include <cstddef>
#include <optional>

#include "mms/instance.hpp"

namespace mms {

struct MmsResult {
  Rational value;
  /// Feasible partition whose worst bundle, under the agent's valuation, is `value`.
  Allocation partition;
};

/// Default cap on n^m for exhaustive enumeration.
inline constexpr double kBruteForceGuard = 1e7;

/// Exact MMS of one agent by enumerating assignment vectors in lexicographic
/// order; the lexicographically smallest optimal vector is returned.
/// Throws GuardExceeded when n^m exceeds `guard`.
MmsResult mms_bruteforce(const Instance& inst, int agent, double guard = kBruteForceGuard);

/// MMS values of every agent.
std::vector<Rational> mms_values_bruteforce(const Instance& inst, double guard = kBruteForceGuard);

struct BestAlphaResult {
  /// Empty when no agent has a non-zero MMS, so every alpha is achievable.
  std::optional<Rational> alpha;
  Allocation allocation;
  std::vector<Rational> mu;
};

/// Goods: max over feasible allocations of min_i v_i(A_i) / mu_i.
/// Chores: min over feasible allocations of max_i v_i(A_i) / mu_i.
/// Agents with mu_i = 0 impose no constraint.
BestAlphaResult best_alpha(const Instance& inst, double guard = kBruteForceGuard);

struct DpResult {
  Rational value;
  Allocation partition;
  /// Total number of states kept over all layers.
  std::size_t states = 0;
};

/// Default cap on the number of states in one DP layer.
inline constexpr std::size_t kDpStateGuard = 2'000'000;

/// Exact max-min partition value for identical agents by the state-space DP.
DpResult mms_identical_dp(const Instance& inst, std::size_t state_guard = kDpStateGuard);

/// (1 - eps) approximation for identical goods agents, (1 + eps) for chores,
/// by merging states whose values fall in the same geometric box of ratio
/// 1 + eps / (2m). `value` is the min bundle value of the returned partition.
DpResult fptas_identical(const Instance& inst, const Rational& eps, std::size_t state_guard = kDpStateGuard);

/// All agents but at most one share a valuation: solve the shared surrogate
/// with fptas_identical and let the deviating agent take the bundle it values
/// most.
Allocation almost_identical(const Instance& inst, const Rational& eps, std::size_t state_guard = kDpStateGuard);

struct BivaluedProfile {
  Rational a;
  Rational b;
  /// ell[i] = number of items agent i values at a.
  std::vector<int> ell;
};

/// Empty unless every value of the instance is one of two constants.
std::optional<BivaluedProfile> bivalued_profile(const Instance& inst);

/// Exact MMS of one agent in a single-category bivalued instance. Bundle 0
/// of the partition has at most m/n items when b >= 0 and at least m/n
/// otherwise.
MmsResult bivalued_mms_partition(const Instance& inst, int agent);

/// Exact MMS allocation of a single-category bivalued instance.
Allocation bivalued_exact(const Instance& inst);

}  // namespace mms
