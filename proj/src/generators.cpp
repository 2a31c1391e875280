#include "mms/generators.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "mms/errors.hpp"

namespace mms {

namespace {

Instance identical_single_category(int n, Kind kind, const std::vector<Rational>& row, int q_minus, int q_plus) {
  Instance inst;
  inst.n_agents = n;
  inst.kind = kind;
  Category c;
  c.name = "C0";
  c.items.resize(row.size());
  std::iota(c.items.begin(), c.items.end(), 0);
  c.q_minus = q_minus;
  c.q_plus = q_plus;
  inst.categories.push_back(std::move(c));
  inst.valuations.assign(n, row);
  return inst;
}

/// Moves the value at position j to item perm[j]; the category lists ids ascending.
Instance shuffled(const Instance& inst, std::uint64_t seed) {
  const int m = inst.num_items();
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  Instance out = inst;
  for (int i = 0; i < inst.n_agents; ++i) {
    for (int j = 0; j < m; ++j) out.valuations[i][perm[j]] = inst.valuations[i][j];
  }
  return out;
}

}  // namespace

Instance tight_goods_instance(int n, bool shuffle, std::uint64_t seed) {
  if (n < 1) throw PreconditionError("tight goods instance needs n >= 1");
  const long k = n;
  std::vector<Rational> row;
  for (long j = 1; j <= 3 * k; ++j) {
    if (j <= k) {
      row.emplace_back(2 * k - j, 3 * k - 1);
    } else if (j <= 3 * k - 2) {
      const long half = (5 * k + 1 - j + 1) / 2;  // ceil((5n+1-j)/2)
      row.emplace_back(half, 6 * k - 2);
    } else {
      row.emplace_back(3 * k - j, 3 * k - 1);
    }
  }
  Instance inst = identical_single_category(n, Kind::Goods, row, 3, 3);
  return shuffle ? shuffled(inst, seed) : inst;
}

Instance tight_chores_instance(int n, bool shuffle, std::uint64_t seed) {
  if (n < 1) throw PreconditionError("tight chores instance needs n >= 1");
  const long k = n;
  std::vector<Rational> row;
  for (long j = 1; j <= 2 * k; ++j) {
    if (j < k) {
      row.emplace_back(-1, 2 * k);
    } else if (j <= k + 1) {
      row.emplace_back(-1, 2);
    } else {
      row.push_back(Rational(1, 2 * k) - Rational(1));
    }
  }
  Instance inst = identical_single_category(n, Kind::Chores, row, 1, n + 1);
  return shuffle ? shuffled(inst, seed) : inst;
}

QuotaPolicy parse_quota_policy(const std::string& text) {
  if (text == "tight") return QuotaPolicy::Tight;
  if (text == "loose") return QuotaPolicy::Loose;
  if (text == "lower-only") return QuotaPolicy::LowerOnly;
  if (text == "upper-only") return QuotaPolicy::UpperOnly;
  if (text == "unconstrained") return QuotaPolicy::Unconstrained;
  throw PreconditionError("unknown quota policy: " + text);
}

std::string to_string(QuotaPolicy policy) {
  switch (policy) {
    case QuotaPolicy::Tight: return "tight";
    case QuotaPolicy::Loose: return "loose";
    case QuotaPolicy::LowerOnly: return "lower-only";
    case QuotaPolicy::UpperOnly: return "upper-only";
    case QuotaPolicy::Unconstrained: return "unconstrained";
  }
  return "tight";
}

Instance random_instance(std::uint64_t seed, int n, const std::vector<int>& category_sizes, QuotaPolicy policy,
                         std::optional<std::pair<int, int>> value_range, Kind kind) {
  if (n < 1) throw PreconditionError("random instance needs n >= 1");
  if (category_sizes.empty()) throw PreconditionError("random instance needs at least one category");
  if (std::any_of(category_sizes.begin(), category_sizes.end(), [](int s) { return s < 0; })) {
    throw PreconditionError("category sizes must be non-negative");
  }
  std::pair<int, int> range = value_range.value_or(kind == Kind::Goods    ? std::pair{0, 8}
                                                   : kind == Kind::Chores ? std::pair{-8, 0}
                                                                          : std::pair{-8, 8});
  if (range.first > range.second) throw PreconditionError("empty value range");
  if (kind == Kind::Goods && range.first < 0) throw PreconditionError("goods need a non-negative value range");
  if (kind == Kind::Chores && range.second > 0) throw PreconditionError("chores need a non-positive value range");

  std::mt19937_64 rng(seed);
  auto draw = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  const int m = std::accumulate(category_sizes.begin(), category_sizes.end(), 0);
  Instance inst;
  inst.n_agents = n;
  inst.kind = kind;
  int next = 0;
  for (std::size_t c = 0; c < category_sizes.size(); ++c) {
    const int size = category_sizes[c];
    const int lo = size / n;
    const int hi = (size + n - 1) / n;
    Category cat;
    cat.name = "C" + std::to_string(c);
    for (int j = 0; j < size; ++j) cat.items.push_back(next++);
    switch (policy) {
      case QuotaPolicy::Tight:
        cat.q_minus = lo;
        cat.q_plus = hi;
        break;
      case QuotaPolicy::Loose:
        cat.q_minus = draw(0, lo);
        cat.q_plus = draw(hi, std::max(hi, size));
        break;
      case QuotaPolicy::LowerOnly:
        cat.q_minus = lo;
        cat.q_plus = size;
        break;
      case QuotaPolicy::UpperOnly:
        cat.q_minus = 0;
        cat.q_plus = hi;
        break;
      case QuotaPolicy::Unconstrained:
        cat.q_minus = 0;
        cat.q_plus = m;
        break;
    }
    inst.categories.push_back(std::move(cat));
  }
  inst.valuations.assign(n, std::vector<Rational>(m));
  for (int i = 0; i < n; ++i) {
    for (int g = 0; g < m; ++g) inst.valuations[i][g] = Rational(draw(range.first, range.second));
  }
  require_valid(inst);
  return inst;
}

}  // namespace mms
