#pragma once

#include <optional>
#include <string>

#include "mms/algorithm.hpp"
#include "mms/bag_state.hpp"

namespace mms {

/// (3n - 1) / (2n), with n replaced by 1 when n = 0.
Rational default_alpha_chores(int n);

/// Initial bags with b_k = max{1, q-, m - sum_{k'>k} b_k' - q+ (k-1)}; bag k
/// holds g_{m-n+k} plus a block of the most valuable items.
BagState init_bags_chores(const Instance& inst);

/// min of 2 v_i(g_{m-n}) and the suffix averages of the initial bags.
std::vector<Rational> mu_hat_chores(const Instance& inst, const BagState& state);

std::optional<std::string> check_invariants_chores(const Instance& inst, const BagState& state,
                                                   const std::vector<Bundle>& assigned, const Rational& alpha);

/// {g^C_{|C|-j} : d(n-1) <= j <= dn} for the category with index `category`.
Bundle chores_pigeonhole_bundle(const Instance& inst, int category, int d);

/// Bag-filling for ordered single-category chores.
AlgorithmResult approx_chores(const Instance& inst, const Rational& alpha, const BagFillingOptions& options = {});
AlgorithmResult approx_chores(const Instance& inst);

}  // namespace mms
