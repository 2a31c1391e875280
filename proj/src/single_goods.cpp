#include "mms/single_goods.hpp"

#include <algorithm>

#include "bag_common.hpp"
#include "mms/errors.hpp"

namespace mms {

using detail::Line;
using detail::PosSet;

Rational default_alpha_goods(int n) {
  const long k = std::max(n, 1);
  return Rational(2 * k, 3 * k - 1);
}

namespace {

void require_single_category(const Instance& inst) {
  if (inst.categories.size() != 1) throw PreconditionError("expected a single-category instance");
}

std::vector<int> bag_sizes_goods(int n, int m, int q_minus, int q_plus) {
  std::vector<int> b(n + 1, 0);
  int later = 0;
  for (int k = n; k >= 1; --k) {
    b[k] = std::min(q_plus, m - later - (k - 1) * std::max(q_minus, 1));
    later += b[k];
  }
  return {b.begin() + 1, b.end()};
}

std::vector<PosSet> initial_bags_goods(const Line& line, const std::vector<int>& sizes) {
  const int n = line.n();
  std::vector<PosSet> bags(n);
  // suffix[k] = sum over k' >= k of (b_k' - 1)
  std::vector<int> suffix(n + 2, 0);
  for (int k = n; k >= 1; --k) suffix[k] = suffix[k + 1] + sizes[k - 1] - 1;
  for (int k = n; k >= 1; --k) {
    bags[k - 1].insert(k);
    for (int j = suffix[k + 1] + 1; j <= suffix[k]; ++j) bags[k - 1].insert(n + j);
  }
  return bags;
}

std::vector<Rational> suffix_average_min(const Line& line, const std::vector<PosSet>& bags) {
  const int n = line.n();
  std::vector<Rational> mu(n);
  for (int i = 0; i < n; ++i) {
    Rational sum;
    std::optional<Rational> best;
    for (int r = n; r >= 1; --r) {
      sum += line.value(i, bags[r - 1]);
      Rational avg = sum / Rational(n - r + 1);
      if (!best || avg < *best) best = avg;
    }
    mu[i] = *best;
  }
  return mu;
}

PosSet reduction_bundle_goods(const Line& line, int q_minus, int q_plus) {
  const int n = line.n();
  const int m = line.m();
  PosSet b{n, n + 1};
  const int tail = std::max(q_minus, m - q_plus * (n - 1)) - 2;
  for (int j = 0; j < tail; ++j) {
    const int p = m - j;
    if (p <= n + 1) throw InternalInvariantError("reduction tail overlaps the leading pair");
    b.insert(p);
  }
  return b;
}

ReductionResult reduce(const Instance& inst, const Line& line, int agent, const PosSet& bundle) {
  std::vector<int> agents;
  for (int i = 0; i < inst.n_agents; ++i) {
    if (i != agent) agents.push_back(i);
  }
  std::vector<int> items;
  for (int p = 1; p <= line.m(); ++p) {
    if (!bundle.count(p)) items.push_back(line.item(p));
  }
  return ReductionResult{line.ids(bundle), restrict_instance(inst, agents, items)};
}

void check_goods_preconditions(const Instance& inst) {
  require_valid(inst);
  require_single_category(inst);
  if (inst.kind != Kind::Goods) throw PreconditionError("expected a goods instance");
  if (!is_ordered(inst)) throw PreconditionError("instance is not ordered");
}

AlgorithmResult run_goods(const Instance& inst, const Rational& alpha, const BagFillingOptions& opts) {
  const int n = inst.n_agents;
  AlgorithmResult res;
  res.allocation.bundles.assign(n, {});
  res.mu_hat.assign(n, std::nullopt);
  const Line line(inst);
  const int m = line.m();
  if (m <= n) {
    for (int i = 0; i < m; ++i) res.allocation.bundles[i] = {line.item(i + 1)};
    return res;
  }

  const auto& cat = inst.categories[0];
  const std::vector<int> sizes = bag_sizes_goods(n, m, cat.q_minus, cat.q_plus);
  std::vector<PosSet> bags = initial_bags_goods(line, sizes);
  const std::vector<Rational> mu_hat = suffix_average_min(line, bags);

  for (int i = 0; i < n; ++i) {
    if (line.value(i, n) + line.value(i, n + 1) >= alpha * mu_hat[i]) {
      const auto red = reduce(inst, line, i, reduction_bundle_goods(line, cat.q_minus, cat.q_plus));
      const AlgorithmResult sub = run_goods(red.reduced.instance, alpha, opts);
      res.allocation.bundles[i] = red.bundle;
      res.mu_hat[i] = mu_hat[i];
      for (std::size_t a = 0; a < red.reduced.agent_map.size(); ++a) {
        const int orig = red.reduced.agent_map[a];
        Bundle b;
        for (int g : sub.allocation.bundles[a]) b.push_back(red.reduced.item_map[g]);
        std::sort(b.begin(), b.end());
        res.allocation.bundles[orig] = std::move(b);
        res.mu_hat[orig] = sub.mu_hat[a];
      }
      res.reductions = sub.reductions + 1;
      return res;
    }
  }

  std::vector<int> remaining(n);
  for (int i = 0; i < n; ++i) remaining[i] = i;
  std::vector<Bundle> assigned;
  const bool want_state = opts.check_invariants || static_cast<bool>(opts.on_round);
  auto round_boundary = [&](int t) {
    if (!want_state) return;
    const BagState st = detail::to_state(line, t, bags, remaining, mu_hat, sizes);
    if (opts.on_round) opts.on_round(inst, st, assigned);
    if (opts.check_invariants) {
      if (auto bad = check_invariants_goods(inst, st, assigned, alpha)) {
        throw InternalInvariantError("condition " + *bad + " violated at t=" + std::to_string(t));
      }
    }
  };
  round_boundary(n);

  const Rational three_halves(3, 2);
  for (int t = n; t >= 1; --t) {
    const std::vector<PosSet> prev = bags;
    std::vector<PosSet> cur(bags.begin(), bags.begin() + (t - 1));
    PosSet bag = bags[t - 1];

    auto someone_rich = [&] {
      for (int i : remaining) {
        if (line.value(i, bag) >= three_halves * alpha * mu_hat[i]) return true;
      }
      return false;
    };

    long steps = 0;
    for (int k = t - 1; k >= 1; --k) {
      const PosSet& bk_t = prev[k - 1];
      PosSet& bk = cur[k - 1];
      while (someone_rich() && !detail::equal_without(bag, t, bk_t, k)) {
        if (++steps > static_cast<long>(m) * m + 8) throw InternalInvariantError("bag update does not terminate");
        // Only items that have not moved yet take part: g is the least valuable
        // item of B other than g_t that did not come from B_k, h the most
        // valuable item of B_k other than g_k that is still there.
        auto it = bag.rbegin();
        while (it != bag.rend() && (*it == t || bk_t.count(*it))) ++it;
        if (it == bag.rend()) throw InternalInvariantError("bag has no movable item");
        const int g = *it;
        bool swapped = false;
        if (bag.size() > bk_t.size()) {
          bag.erase(g);
          bk.insert(g);
        } else {
          auto jt = bk.begin();
          while (jt != bk.end() && (*jt == k || !bk_t.count(*jt))) ++jt;
          if (jt == bk.end()) throw InternalInvariantError("bag has no item to swap in");
          const int h = *jt;
          bag.erase(g);
          bag.insert(h);
          bk.erase(h);
          bk.insert(g);
          swapped = true;
        }
        if (opts.on_step) opts.on_step(inst, BagStep{t, k, swapped, line.ids(bag), line.ids(bk)});
      }
    }

    int chosen = -1;
    for (int i : remaining) {
      if (line.value(i, bag) >= alpha * mu_hat[i]) {
        chosen = i;
        break;
      }
    }
    if (chosen < 0) throw InternalInvariantError("no remaining agent accepts the bag at t=" + std::to_string(t));
    res.allocation.bundles[chosen] = line.ids(bag);
    res.mu_hat[chosen] = mu_hat[chosen];
    assigned.push_back(res.allocation.bundles[chosen]);
    remaining.erase(std::find(remaining.begin(), remaining.end(), chosen));
    bags = std::move(cur);
    round_boundary(t - 1);
  }
  return res;
}

}  // namespace

BagState init_bags_goods(const Instance& inst) {
  require_single_category(inst);
  const Line line(inst);
  const int n = inst.n_agents;
  if (line.m() <= n) throw PreconditionError("bag initialization needs more items than agents");
  const auto& cat = inst.categories[0];
  const auto sizes = bag_sizes_goods(n, line.m(), cat.q_minus, cat.q_plus);
  std::vector<int> remaining(n);
  for (int i = 0; i < n; ++i) remaining[i] = i;
  return detail::to_state(line, n, initial_bags_goods(line, sizes), remaining, {}, sizes);
}

std::vector<Rational> mu_hat_goods(const Instance& inst, const BagState& state) {
  require_single_category(inst);
  const Line line(inst);
  std::vector<PosSet> bags;
  for (const auto& b : state.bags) bags.push_back(line.positions(b));
  if (static_cast<int>(bags.size()) != inst.n_agents) throw PreconditionError("expected one bag per agent");
  return suffix_average_min(line, bags);
}

ReductionResult valid_reduction_goods(const Instance& inst, int agent, const Rational& alpha) {
  check_goods_preconditions(inst);
  const Line line(inst);
  const int n = inst.n_agents;
  if (agent < 0 || agent >= n) throw PreconditionError("agent index out of range");
  if (line.m() <= n) throw PreconditionError("valid reduction needs more items than agents");
  BagState st = init_bags_goods(inst);
  const auto mu = mu_hat_goods(inst, st);
  if (line.value(agent, n) + line.value(agent, n + 1) < alpha * mu[agent]) {
    throw PreconditionError("agent does not value {g_n, g_n+1} at alpha * mu_hat");
  }
  const auto& cat = inst.categories[0];
  return reduce(inst, line, agent, reduction_bundle_goods(line, cat.q_minus, cat.q_plus));
}

std::optional<std::string> check_invariants_goods(const Instance& inst, const BagState& state,
                                                  const std::vector<Bundle>& assigned, const Rational& alpha) {
  const Line line(inst);
  const int n = inst.n_agents;
  const int t = state.t;
  if (static_cast<int>(state.bags.size()) != t) return "C1";
  if (auto bad = detail::check_cover(inst, state.bags, assigned)) return bad;

  const auto& cat = inst.categories[0];
  for (int k = 1; k <= t; ++k) {
    const int size = static_cast<int>(state.bags[k - 1].size());
    if (size < cat.q_minus || size > cat.q_plus) return "C3";
    if (k > 1 && static_cast<int>(state.bags[k - 2].size()) > size) return "C3";
  }

  std::vector<int> special(t);
  for (int k = 1; k <= t; ++k) {
    special[k - 1] = k;
    int tops = 0;
    bool has_own = false;
    for (int g : state.bags[k - 1]) {
      const int p = line.position(g);
      if (p <= n) {
        ++tops;
        has_own = has_own || p == k;
      }
    }
    if (tops != 1 || !has_own) return "C4";
  }

  if (!detail::value_order_holds(line, state, special)) return "C5";

  const Rational slack = Rational(n - t) * (Rational(3, 2) * alpha - Rational(1));
  for (int i : state.remaining_agents) {
    Rational sum;
    for (int r = t; r >= 1; --r) {
      sum += bundle_value(inst, i, state.bags[r - 1]);
      if (sum < (Rational(t - r + 1) - slack) * state.mu_hat[i]) return "C6";
    }
  }
  return std::nullopt;
}

AlgorithmResult approx_goods(const Instance& inst, const Rational& alpha, const BagFillingOptions& options) {
  check_goods_preconditions(inst);
  const int n = std::max(inst.n_agents, 1);
  const Rational hi = Rational(2) / (Rational(3) - Rational(1, n));
  if (alpha < Rational(2, 3) || alpha > hi) {
    throw PreconditionError("alpha " + alpha.to_string() + " outside [2/3, " + hi.to_string() + "]");
  }
  return run_goods(inst, alpha, options);
}

AlgorithmResult approx_goods(const Instance& inst) {
  return approx_goods(inst, default_alpha_goods(inst.n_agents));
}

}  // namespace mms
