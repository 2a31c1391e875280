#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mms/instance.hpp"

namespace mms {

/// n agents, 3n goods, quotas (3,3). Identical, ordered values with MMS 1;
/// ApproxGoods reaches exactly 2n/(3n-1) on it.
/// With `shuffle`, item ids are permuted (deterministically in `seed`) so the
/// instance is no longer ordered.
Instance tight_goods_instance(int n, bool shuffle = false, std::uint64_t seed = 0);

/// n agents, 2n chores, quotas (1, n+1). Identical, ordered values with MMS -1;
/// ApproxChores reaches exactly (3n-1)/(2n) on it.
Instance tight_chores_instance(int n, bool shuffle = false, std::uint64_t seed = 0);

enum class QuotaPolicy { Tight, Loose, LowerOnly, UpperOnly, Unconstrained };

/// "tight", "loose", "lower-only", "upper-only", "unconstrained".
QuotaPolicy parse_quota_policy(const std::string& text);
std::string to_string(QuotaPolicy policy);

/// Random instance with integer values drawn uniformly from `value_range`
/// (default [0,8] for goods, [-8,0] for chores, [-8,8] for mixed). Items are
/// numbered consecutively per category. Quotas per category of size c:
///   tight         (floor(c/n), ceil(c/n))
///   loose         q- uniform in [0, floor(c/n)], q+ uniform in [ceil(c/n), c]
///   lower-only    (floor(c/n), c)
///   upper-only    (0, ceil(c/n))
///   unconstrained (0, m)
Instance random_instance(std::uint64_t seed, int n, const std::vector<int>& category_sizes, QuotaPolicy policy,
                         std::optional<std::pair<int, int>> value_range, Kind kind);

}  // namespace mms
