#include "mms/exact_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <unordered_map>

#include "mms/errors.hpp"
#include "mms/ordered.hpp"

namespace mms {

namespace {

constexpr std::int64_t kSafeMagnitude = std::int64_t{1} << 60;

/// Integer scaling of a set of rationals by the LCM of their denominators.
struct Scaled {
  bool fits = false;
  std::vector<std::int64_t> values;
  mpz_class factor = 1;
};

Scaled scale_row(const std::vector<Rational>& row) {
  Scaled s;
  mpz_class l = 1;
  for (const auto& x : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.raw().get_den_mpz_t());
  s.factor = l;
  mpz_class total = 0;
  std::vector<mpz_class> ints;
  for (const auto& x : row) {
    mpz_class v = x.raw().get_num() * (l / x.raw().get_den());
    total += abs(v);
    ints.push_back(v);
  }
  if (total >= mpz_class(std::to_string(kSafeMagnitude))) return s;
  s.fits = true;
  for (const auto& v : ints) s.values.push_back(v.get_si());
  return s;
}

void check_guard(int n, int m, double guard) {
  const double size = std::pow(static_cast<double>(std::max(n, 1)), static_cast<double>(m));
  if (size > guard) {
    throw GuardExceeded("enumeration of " + std::to_string(n) + "^" + std::to_string(m) +
                        " assignments exceeds the guard; use the DP oracle or a smaller instance");
  }
}

/// Shared quota bookkeeping for assignment enumeration over item ids 0..m-1.
struct QuotaTracker {
  int n = 0;
  std::vector<int> cat;
  std::vector<int> q_minus, q_plus;
  std::vector<int> remaining;  // per category, items not yet assigned
  std::vector<int> deficit;    // per category, sum over bundles of max(0, q- - count)
  std::vector<std::vector<int>> count;

  explicit QuotaTracker(const Instance& inst) : n(inst.n_agents), cat(category_index(inst)) {
    const std::size_t k = inst.categories.size();
    for (const auto& c : inst.categories) {
      q_minus.push_back(c.q_minus);
      q_plus.push_back(c.q_plus);
      remaining.push_back(static_cast<int>(c.items.size()));
      deficit.push_back(c.q_minus * n);
    }
    count.assign(n, std::vector<int>(k, 0));
  }

  bool can_place(int g, int b) const { return count[b][cat[g]] < q_plus[cat[g]]; }

  /// Places g into b; returns false (state still updated) if q- becomes unreachable.
  bool place(int g, int b) {
    const int c = cat[g];
    if (count[b][c] < q_minus[c]) --deficit[c];
    ++count[b][c];
    --remaining[c];
    return deficit[c] <= remaining[c];
  }

  void unplace(int g, int b) {
    const int c = cat[g];
    --count[b][c];
    if (count[b][c] < q_minus[c]) ++deficit[c];
    ++remaining[c];
  }
};

template <typename T>
struct PartitionSearch {
  const std::vector<T>& value;
  QuotaTracker quota;
  int n;
  int m;
  std::vector<T> sums;
  std::vector<int> assign;
  std::vector<int> best_assign;
  std::optional<T> best;

  PartitionSearch(const Instance& inst, const std::vector<T>& v)
      : value(v), quota(inst), n(inst.n_agents), m(inst.num_items()), sums(n, T{}), assign(m, -1) {}

  void run(int g, int used) {
    if (g == m) {
      T worst = sums[0];
      for (int b = 1; b < n; ++b) worst = std::min(worst, sums[b]);
      if (!best || worst > *best) {
        best = worst;
        best_assign = assign;
      }
      return;
    }
    // Bundles are interchangeable for one agent: only open bundle `used` next.
    const int limit = std::min(used + 1, n);
    for (int b = 0; b < limit; ++b) {
      if (!quota.can_place(g, b)) continue;
      const bool ok = quota.place(g, b);
      if (ok) {
        assign[g] = b;
        sums[b] += value[g];
        run(g + 1, std::max(used, b + 1));
        sums[b] -= value[g];
      }
      quota.unplace(g, b);
    }
  }
};

Allocation from_assignment(int n, const std::vector<int>& assign) {
  Allocation a;
  a.bundles.assign(n, {});
  for (std::size_t g = 0; g < assign.size(); ++g) a.bundles[assign[g]].push_back(static_cast<int>(g));
  return a;
}

template <typename T>
MmsResult search_partition(const Instance& inst, const std::vector<T>& values, std::function<Rational(const T&)> back) {
  PartitionSearch<T> s(inst, values);
  s.run(0, 0);
  if (!s.best) throw InvalidInstance("instance admits no feasible partition");
  return MmsResult{back(*s.best), from_assignment(inst.n_agents, s.best_assign)};
}

}  // namespace

MmsResult mms_bruteforce(const Instance& inst, int agent, double guard) {
  require_valid(inst);
  if (agent < 0 || agent >= inst.n_agents) throw PreconditionError("agent index out of range");
  check_guard(inst.n_agents, inst.num_items(), guard);
  const auto& row = inst.valuations[agent];
  const Scaled s = scale_row(row);
  if (s.fits) {
    const mpz_class factor = s.factor;
    return search_partition<std::int64_t>(inst, s.values, [&](const std::int64_t& v) {
      return Rational(mpq_class(mpz_class(std::to_string(v)), factor));
    });
  }
  return search_partition<Rational>(inst, row, [](const Rational& v) { return v; });
}

std::vector<Rational> mms_values_bruteforce(const Instance& inst, double guard) {
  std::vector<Rational> mu;
  for (int i = 0; i < inst.n_agents; ++i) mu.push_back(mms_bruteforce(inst, i, guard).value);
  return mu;
}

BestAlphaResult best_alpha(const Instance& inst, double guard) {
  require_valid(inst);
  if (inst.kind == Kind::Mixed) throw PreconditionError("best_alpha needs a goods or chores instance");
  const int n = inst.n_agents;
  const int m = inst.num_items();
  check_guard(n, m, guard);
  BestAlphaResult res;
  res.mu = mms_values_bruteforce(inst, guard);
  const bool goods = inst.kind == Kind::Goods;

  std::vector<int> constrained;
  for (int i = 0; i < n; ++i) {
    if (!res.mu[i].is_zero()) constrained.push_back(i);
  }

  QuotaTracker quota(inst);
  std::vector<std::vector<Rational>> sums(n, std::vector<Rational>(1));
  std::vector<Rational> sum(n);
  std::vector<int> assign(m, -1), best_assign;
  std::optional<Rational> best;
  bool found = false;

  std::function<void(int)> rec = [&](int g) {
    if (g == m) {
      if (constrained.empty()) {
        if (!found) {
          found = true;
          best_assign = assign;
        }
        return;
      }
      std::optional<Rational> score;
      for (int i : constrained) {
        Rational r = sum[i] / res.mu[i];
        if (!score || (goods ? r < *score : r > *score)) score = r;
      }
      if (!best || (goods ? *score > *best : *score < *best)) {
        best = score;
        best_assign = assign;
        found = true;
      }
      return;
    }
    for (int b = 0; b < n; ++b) {
      if (!quota.can_place(g, b)) continue;
      if (quota.place(g, b)) {
        assign[g] = b;
        sum[b] += inst.valuations[b][g];
        rec(g + 1);
        sum[b] -= inst.valuations[b][g];
      }
      quota.unplace(g, b);
    }
  };
  rec(0);
  if (!found) throw InvalidInstance("instance admits no feasible allocation");
  res.alpha = best;
  res.allocation = from_assignment(n, best_assign);
  return res;
}

namespace {

/// Dynamic program over (category counts, value) tuples of identical agents.
/// Tuples are kept sorted so states differing only by agent labels coincide.
class IdenticalDp {
public:
  IdenticalDp(const Instance& inst, std::size_t guard) : inst_(inst), guard_(guard) {
    require_valid(inst);
    if (!identical_agents(inst)) throw PreconditionError("agents are not identical");
    n_ = inst.n_agents;
    m_ = inst.num_items();
    k_ = static_cast<int>(inst.categories.size());
    cat_ = category_index(inst);
    const Scaled s = scale_row(inst.valuations[0]);
    if (!s.fits) throw GuardExceeded("scaled values exceed 64-bit range");
    values_ = s.values;
    factor_ = s.factor;
    for (const auto& c : inst.categories) {
      q_minus_.push_back(c.q_minus);
      q_plus_.push_back(c.q_plus);
    }
  }

  /// eps empty: exact. Otherwise merge states within the same value boxes.
  DpResult run(const std::optional<Rational>& eps) {
    if (eps) build_boxes(*eps);
    const int width = k_ + 1;
    std::vector<int> remaining(k_, 0);
    for (int g = 0; g < m_; ++g) ++remaining[cat_[g]];

    layers_.clear();
    layers_.push_back({Node{std::vector<std::int64_t>(static_cast<std::size_t>(n_) * width, 0), -1, -1}});
    std::size_t total = 1;
    for (int g = 0; g < m_; ++g) {
      const int c = cat_[g];
      --remaining[c];
      std::vector<Node> next;
      std::unordered_map<std::vector<std::int64_t>, std::size_t, VecHash> index;
      const auto& layer = layers_.back();
      for (std::size_t s = 0; s < layer.size(); ++s) {
        const auto& st = layer[s].state;
        for (int a = 0; a < n_; ++a) {
          if (a > 0 && std::equal(st.begin() + (a - 1) * width, st.begin() + a * width, st.begin() + a * width)) {
            continue;
          }
          if (st[a * width + c] >= q_plus_[c]) continue;
          std::vector<std::int64_t> ns = st;
          ns[a * width + c] += 1;
          ns[a * width + k_] += values_[g];
          long deficit = 0;
          for (int b = 0; b < n_; ++b) deficit += std::max<long>(0, q_minus_[c] - ns[b * width + c]);
          if (deficit > remaining[c]) continue;
          canonicalize(ns);
          if (index.emplace(ns, next.size()).second) next.push_back(Node{std::move(ns), static_cast<long>(s), a});
        }
      }
      if (eps) next = trim(std::move(next));
      if (next.size() > guard_) throw GuardExceeded("DP layer exceeds " + std::to_string(guard_) + " states");
      total += next.size();
      layers_.push_back(std::move(next));
    }

    const auto& last = layers_.back();
    long best = -1;
    std::int64_t best_value = 0;
    for (std::size_t s = 0; s < last.size(); ++s) {
      const auto& st = last[s].state;
      std::int64_t worst = std::numeric_limits<std::int64_t>::max();
      for (int a = 0; a < n_; ++a) worst = std::min(worst, st[a * width + k_]);
      if (n_ == 0) worst = 0;
      if (best < 0 || worst > best_value) {
        best = static_cast<long>(s);
        best_value = worst;
      }
    }
    if (best < 0) throw InvalidInstance("instance admits no feasible partition");

    DpResult res;
    res.partition = reconstruct(best);
    res.states = total;
    res.value = Rational(mpq_class(mpz_class(std::to_string(best_value)), factor_));
    return res;
  }

private:
  struct Node {
    std::vector<std::int64_t> state;
    long parent;
    int slot;
  };
  struct VecHash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const noexcept {
      std::size_t h = 1469598103934665603ull;
      for (auto x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
      return h;
    }
  };

  void canonicalize(std::vector<std::int64_t>& s) const {
    const int width = k_ + 1;
    std::vector<std::vector<std::int64_t>> tuples(n_);
    for (int a = 0; a < n_; ++a) tuples[a].assign(s.begin() + a * width, s.begin() + (a + 1) * width);
    std::sort(tuples.begin(), tuples.end());
    for (int a = 0; a < n_; ++a) std::copy(tuples[a].begin(), tuples[a].end(), s.begin() + a * width);
  }

  void build_boxes(const Rational& eps) {
    if (eps.sign() <= 0 || eps > Rational(1)) throw PreconditionError("eps must lie in (0, 1]");
    const bool goods = std::all_of(values_.begin(), values_.end(), [](std::int64_t v) { return v >= 0; });
    const bool chores = std::all_of(values_.begin(), values_.end(), [](std::int64_t v) { return v <= 0; });
    if (!goods && !chores) throw PreconditionError("approximation needs all values of one sign");
    std::int64_t top = 0;
    for (auto v : values_) top += v < 0 ? -v : v;
    // delta = 1 + eps / (2m) = num / den
    const Rational delta = Rational(1) + eps / Rational(2 * std::max(m_, 1));
    const mpz_class num = delta.numerator();
    const mpz_class den = delta.denominator();
    bounds_.assign(1, 1);
    while (bounds_.back() <= top) {
      mpz_class b(std::to_string(bounds_.back()));
      mpz_class next = (b * num) / den + 1;
      bounds_.push_back(std::stoll(next.get_str()));
    }
  }

  long box(std::int64_t v) const {
    const std::int64_t x = v < 0 ? -v : v;
    if (x == 0) return -1;
    return static_cast<long>(std::upper_bound(bounds_.begin(), bounds_.end(), x) - bounds_.begin()) - 1;
  }

  std::vector<Node> trim(std::vector<Node> nodes) const {
    const int width = k_ + 1;
    std::map<std::vector<std::int64_t>, std::size_t> rep;
    std::vector<std::size_t> order;
    for (std::size_t s = 0; s < nodes.size(); ++s) {
      std::vector<std::int64_t> key = nodes[s].state;
      for (int a = 0; a < n_; ++a) key[a * width + k_] = box(key[a * width + k_]);
      auto [it, fresh] = rep.emplace(std::move(key), s);
      if (fresh) {
        order.push_back(s);
      } else if (nodes[s].state < nodes[it->second].state) {
        it->second = s;
      }
    }
    std::vector<Node> kept;
    for (std::size_t s : order) {
      std::vector<std::int64_t> key = nodes[s].state;
      for (int a = 0; a < n_; ++a) key[a * width + k_] = box(key[a * width + k_]);
      kept.push_back(nodes[rep.at(key)]);
    }
    return kept;
  }

  Allocation reconstruct(long final_index) const {
    std::vector<int> slots(m_);
    long idx = final_index;
    for (int g = m_; g >= 1; --g) {
      const Node& node = layers_[g][idx];
      slots[g - 1] = node.slot;
      idx = node.parent;
    }
    const int width = k_ + 1;
    // Replay forward, carrying a bundle label with every tuple.
    std::vector<std::pair<std::vector<std::int64_t>, int>> tuples(n_);
    for (int a = 0; a < n_; ++a) tuples[a] = {std::vector<std::int64_t>(width, 0), a};
    Allocation alloc;
    alloc.bundles.assign(n_, {});
    for (int g = 0; g < m_; ++g) {
      auto& t = tuples[slots[g]];
      t.first[cat_[g]] += 1;
      t.first[k_] += values_[g];
      alloc.bundles[t.second].push_back(g);
      std::stable_sort(tuples.begin(), tuples.end(),
                       [](const auto& x, const auto& y) { return x.first < y.first; });
    }
    return alloc;
  }

  const Instance& inst_;
  std::size_t guard_;
  int n_ = 0, m_ = 0, k_ = 0;
  std::vector<int> cat_;
  std::vector<std::int64_t> values_;
  mpz_class factor_ = 1;
  std::vector<int> q_minus_, q_plus_;
  std::vector<std::int64_t> bounds_;
  std::vector<std::vector<Node>> layers_;
};

}  // namespace

DpResult mms_identical_dp(const Instance& inst, std::size_t state_guard) {
  IdenticalDp dp(inst, state_guard);
  return dp.run(std::nullopt);
}

DpResult fptas_identical(const Instance& inst, const Rational& eps, std::size_t state_guard) {
  IdenticalDp dp(inst, state_guard);
  DpResult res = dp.run(eps);
  // Report the exact worst bundle of the partition actually returned.
  if (inst.n_agents > 0) {
    Rational worst = bundle_value(inst, 0, res.partition.bundles[0]);
    for (int i = 1; i < inst.n_agents; ++i) worst = min(worst, bundle_value(inst, i, res.partition.bundles[i]));
    res.value = worst;
  }
  return res;
}

Allocation almost_identical(const Instance& inst, const Rational& eps, std::size_t state_guard) {
  require_valid(inst);
  const int n = inst.n_agents;
  if (identical_agents(inst)) return fptas_identical(inst, eps, state_guard).partition;

  // The shared row is the one held by at least n - 1 agents; with two agents
  // agent 0's row is taken as shared.
  int common = -1;
  for (int i = 0; i < n && common < 0; ++i) {
    int same = 0;
    for (int j = 0; j < n; ++j) same += inst.valuations[j] == inst.valuations[i] ? 1 : 0;
    if (same >= n - 1) common = i;
  }
  if (common < 0) throw PreconditionError("more than one agent deviates from the shared valuation");
  int deviating = -1;
  for (int j = 0; j < n; ++j) {
    if (inst.valuations[j] != inst.valuations[common]) deviating = j;
  }

  Instance surrogate = inst;
  for (auto& row : surrogate.valuations) row = inst.valuations[common];
  Allocation alloc = fptas_identical(surrogate, eps, state_guard).partition;

  int pick = 0;
  Rational best = bundle_value(inst, deviating, alloc.bundles[0]);
  for (int k = 1; k < n; ++k) {
    Rational v = bundle_value(inst, deviating, alloc.bundles[k]);
    if (v > best) {
      best = v;
      pick = k;
    }
  }
  std::swap(alloc.bundles[deviating], alloc.bundles[pick]);
  return alloc;
}

std::optional<BivaluedProfile> bivalued_profile(const Instance& inst) {
  std::vector<Rational> distinct;
  for (const auto& row : inst.valuations) {
    for (const auto& x : row) {
      if (std::find(distinct.begin(), distinct.end(), x) == distinct.end()) {
        distinct.push_back(x);
        if (distinct.size() > 2) return std::nullopt;
      }
    }
  }
  BivaluedProfile p;
  if (distinct.empty()) distinct.push_back(Rational(0));
  p.a = max(distinct.front(), distinct.back());
  p.b = min(distinct.front(), distinct.back());
  for (const auto& row : inst.valuations) {
    p.ell.push_back(static_cast<int>(std::count(row.begin(), row.end(), p.a)));
  }
  return p;
}

namespace {

/// Max-min split of x items worth a and y items worth b into k bundles whose
/// sizes lie in [lo, hi].
class BivaluedSplit {
public:
  BivaluedSplit(Rational a, Rational b, int lo, int hi) : a_(std::move(a)), b_(std::move(b)), lo_(lo), hi_(hi) {}

  struct Val {
    bool feasible = false;
    bool unbounded = false;  // no bundle left: min over an empty set
    Rational v;
  };

  Val best(int k, int x, int y) {
    if (k == 0) return Val{x == 0 && y == 0, true, {}};
    const auto key = std::make_tuple(k, x, y);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Val out;
    for (int s = lo_; s <= hi_; ++s) {
      for (int sa = std::max(0, s - y); sa <= std::min(s, x); ++sa) {
        Val cand = combine(sa, s - sa, best(k - 1, x - sa, y - (s - sa)));
        if (better(cand, out)) out = cand;
      }
    }
    memo_[key] = out;
    return out;
  }

  Val combine(int sa, int sb, const Val& rest) const {
    if (!rest.feasible) return {};
    Rational here = a_ * Rational(sa) + b_ * Rational(sb);
    return Val{true, false, rest.unbounded ? here : min(here, rest.v)};
  }

  static bool better(const Val& x, const Val& y) {
    if (!x.feasible) return false;
    if (!y.feasible) return true;
    if (x.unbounded != y.unbounded) return x.unbounded;
    return x.v > y.v;
  }

  int lo() const { return lo_; }
  int hi() const { return hi_; }

private:
  Rational a_, b_;
  int lo_, hi_;
  std::map<std::tuple<int, int, int>, Val> memo_;
};

struct SplitPlan {
  Rational value;
  std::vector<std::pair<int, int>> bundles;  // (a-count, b-count) per bundle
};

SplitPlan plan_split(const Rational& a, const Rational& b, int n, int x, int y, int lo, int hi) {
  BivaluedSplit dp(a, b, lo, hi);
  const int m = x + y;
  const auto target = dp.best(n, x, y);
  if (!target.feasible) throw InvalidInstance("instance admits no feasible partition");

  SplitPlan plan;
  plan.value = target.v;
  // First bundle: at most m/n items when b >= 0, at least m/n otherwise.
  std::vector<int> sizes;
  if (b.sign() >= 0) {
    for (int s = lo; s <= hi; ++s) {
      if (static_cast<long>(s) * n <= m) sizes.push_back(s);
    }
  } else {
    for (int s = hi; s >= lo; --s) {
      if (static_cast<long>(s) * n >= m) sizes.push_back(s);
    }
  }
  int cx = x, cy = y;
  for (int k = n; k >= 1; --k) {
    if (k != n) {
      sizes.clear();
      for (int s = lo; s <= hi; ++s) sizes.push_back(s);
    }
    const auto goal = dp.best(k, cx, cy);
    bool placed = false;
    for (int s : sizes) {
      for (int sa = std::max(0, s - cy); sa <= std::min(s, cx) && !placed; ++sa) {
        const auto cand = dp.combine(sa, s - sa, dp.best(k - 1, cx - sa, cy - (s - sa)));
        if (!BivaluedSplit::better(goal, cand) && cand.feasible) {
          plan.bundles.emplace_back(sa, s - sa);
          cx -= sa;
          cy -= s - sa;
          placed = true;
        }
      }
      if (placed) break;
    }
    if (!placed) throw InternalInvariantError("no optimal first bundle of the required size");
  }
  return plan;
}

MmsResult bivalued_partition_with(const Instance& inst, int agent, const Rational& a, const Rational& b) {
  const auto& cat = inst.categories[0];
  std::vector<int> a_items, b_items;
  for (int g : sorted(cat.items)) {
    if (a == b || inst.valuations[agent][g] == a) {
      a_items.push_back(g);
    } else {
      b_items.push_back(g);
    }
  }
  const SplitPlan plan = plan_split(a, b, inst.n_agents, static_cast<int>(a_items.size()),
                                    static_cast<int>(b_items.size()), cat.q_minus, cat.q_plus);
  MmsResult res;
  res.value = plan.value;
  res.partition.bundles.assign(inst.n_agents, {});
  std::size_t ia = 0, ib = 0;
  for (std::size_t k = 0; k < plan.bundles.size(); ++k) {
    auto& bundle = res.partition.bundles[k];
    for (int j = 0; j < plan.bundles[k].first; ++j) bundle.push_back(a_items[ia++]);
    for (int j = 0; j < plan.bundles[k].second; ++j) bundle.push_back(b_items[ib++]);
    std::sort(bundle.begin(), bundle.end());
  }
  return res;
}

void require_bivalued_single(const Instance& inst) {
  require_valid(inst);
  if (inst.categories.size() != 1) throw PreconditionError("expected a single-category instance");
}

Allocation bivalued_recurse(const Instance& ord, const Rational& a, const Rational& b) {
  const int n = ord.n_agents;
  Allocation out;
  out.bundles.assign(n, {});
  if (n == 0) return out;
  const auto& items = ord.categories[0].items;
  const int m = static_cast<int>(items.size());

  std::vector<int> ell(n);
  for (int i = 0; i < n; ++i) {
    ell[i] = a == b ? m : static_cast<int>(std::count_if(items.begin(), items.end(), [&](int g) {
      return ord.valuations[i][g] == a;
    }));
  }
  const int star = static_cast<int>(std::max_element(ell.begin(), ell.end()) - ell.begin());
  const MmsResult part = bivalued_partition_with(ord, star, a, b);
  const Bundle& first = part.partition.bundles[0];
  int pa = 0;
  for (int g : first) pa += (a == b || ord.valuations[star][g] == a) ? 1 : 0;
  const int pb = static_cast<int>(first.size()) - pa;

  std::vector<char> take(m, 0);
  for (int j = ell[star] - pa + 1; j <= ell[star]; ++j) take[j - 1] = 1;
  for (int j = m - pb + 1; j <= m; ++j) take[j - 1] = 1;

  Bundle bundle;
  std::vector<int> rest_items;
  for (int j = 0; j < m; ++j) (take[j] ? bundle : rest_items).push_back(items[j]);
  std::vector<int> agents;
  for (int i = 0; i < n; ++i) {
    if (i != star) agents.push_back(i);
  }
  const SubInstance sub = restrict_instance(ord, agents, rest_items);
  const Allocation inner = bivalued_recurse(sub.instance, a, b);
  out.bundles[star] = sorted(bundle);
  for (std::size_t k = 0; k < agents.size(); ++k) {
    Bundle mapped;
    for (int g : inner.bundles[k]) mapped.push_back(sub.item_map[g]);
    out.bundles[sub.agent_map[k]] = sorted(mapped);
  }
  return out;
}

}  // namespace

MmsResult bivalued_mms_partition(const Instance& inst, int agent) {
  require_bivalued_single(inst);
  if (agent < 0 || agent >= inst.n_agents) throw PreconditionError("agent index out of range");
  const auto profile = bivalued_profile(inst);
  if (!profile) throw PreconditionError("instance is not bivalued");
  return bivalued_partition_with(inst, agent, profile->a, profile->b);
}

Allocation bivalued_exact(const Instance& inst) {
  require_bivalued_single(inst);
  const auto profile = bivalued_profile(inst);
  if (!profile) throw PreconditionError("instance is not bivalued");
  const OrderedReduction red = to_ordered(inst);
  const Allocation ordered_alloc = bivalued_recurse(red.ordered_instance, profile->a, profile->b);
  return lift_allocation(red, ordered_alloc);
}

}  // namespace mms
