#include "mms/single_chores.hpp"

#include <algorithm>

#include "bag_common.hpp"
#include "mms/errors.hpp"

namespace mms {

using detail::Line;
using detail::PosSet;

Rational default_alpha_chores(int n) {
  const long k = std::max(n, 1);
  return Rational(3 * k - 1, 2 * k);
}

namespace {

void require_single_category(const Instance& inst) {
  if (inst.categories.size() != 1) throw PreconditionError("expected a single-category instance");
}

std::vector<int> bag_sizes_chores(int n, int m, int q_minus, int q_plus) {
  std::vector<int> b(n + 1, 0);
  int later = 0;
  for (int k = n; k >= 1; --k) {
    b[k] = std::max({1, q_minus, m - later - q_plus * (k - 1)});
    later += b[k];
  }
  return {b.begin() + 1, b.end()};
}

std::vector<PosSet> initial_bags_chores(const Line& line, const std::vector<int>& sizes) {
  const int n = line.n();
  const int m = line.m();
  std::vector<PosSet> bags(n);
  std::vector<int> suffix(n + 2, 0);
  for (int k = n; k >= 1; --k) suffix[k] = suffix[k + 1] + sizes[k - 1] - 1;
  for (int k = n; k >= 1; --k) {
    bags[k - 1].insert(m - n + k);
    for (int j = suffix[k + 1] + 1; j <= suffix[k]; ++j) bags[k - 1].insert(j);
  }
  return bags;
}

std::vector<Rational> mu_hat_from_bags(const Line& line, const std::vector<PosSet>& bags) {
  const int n = line.n();
  const int m = line.m();
  std::vector<Rational> mu(n);
  for (int i = 0; i < n; ++i) {
    Rational best = Rational(2) * line.value(i, m - n);
    Rational sum;
    for (int r = n; r >= 1; --r) {
      sum += line.value(i, bags[r - 1]);
      best = min(best, sum / Rational(n - r + 1));
    }
    mu[i] = best;
  }
  return mu;
}

}  // namespace

BagState init_bags_chores(const Instance& inst) {
  require_single_category(inst);
  const Line line(inst);
  const int n = inst.n_agents;
  if (line.m() <= n) throw PreconditionError("bag initialization needs more items than agents");
  const auto& cat = inst.categories[0];
  const auto sizes = bag_sizes_chores(n, line.m(), cat.q_minus, cat.q_plus);
  std::vector<int> remaining(n);
  for (int i = 0; i < n; ++i) remaining[i] = i;
  return detail::to_state(line, n, initial_bags_chores(line, sizes), remaining, {}, sizes);
}

std::vector<Rational> mu_hat_chores(const Instance& inst, const BagState& state) {
  require_single_category(inst);
  const Line line(inst);
  if (static_cast<int>(state.bags.size()) != inst.n_agents) throw PreconditionError("expected one bag per agent");
  if (line.m() <= inst.n_agents) throw PreconditionError("mu_hat needs more items than agents");
  std::vector<PosSet> bags;
  for (const auto& b : state.bags) bags.push_back(line.positions(b));
  return mu_hat_from_bags(line, bags);
}

std::optional<std::string> check_invariants_chores(const Instance& inst, const BagState& state,
                                                   const std::vector<Bundle>& assigned, const Rational& alpha) {
  const Line line(inst);
  const int n = inst.n_agents;
  const int m = line.m();
  const int t = state.t;
  if (static_cast<int>(state.bags.size()) != t) return "C1";
  if (auto bad = detail::check_cover(inst, state.bags, assigned)) return bad;

  const auto& cat = inst.categories[0];
  for (int k = 1; k <= t; ++k) {
    const int size = static_cast<int>(state.bags[k - 1].size());
    if (size < cat.q_minus || size > cat.q_plus) return "C3";
    if (k > 1 && static_cast<int>(state.bags[k - 2].size()) < size) return "C3";
  }

  std::vector<int> special(t);
  for (int k = 1; k <= t; ++k) {
    special[k - 1] = m - n + k;
    int tails = 0;
    bool has_own = false;
    for (int g : state.bags[k - 1]) {
      const int p = line.position(g);
      if (p > m - n) {
        ++tails;
        has_own = has_own || p == m - n + k;
      }
    }
    if (tails != 1 || !has_own) return "C4";
  }

  if (!detail::value_order_holds(line, state, special)) return "C5";

  const Rational extra = Rational(n - t) * (Rational(3, 2) - alpha);
  for (int i : state.remaining_agents) {
    Rational sum;
    for (int r = t; r >= 1; --r) {
      sum += bundle_value(inst, i, state.bags[r - 1]);
      if (sum < (Rational(t - r + 1) + extra) * state.mu_hat[i]) return "C6";
    }
  }
  return std::nullopt;
}

Bundle chores_pigeonhole_bundle(const Instance& inst, int category, int d) {
  if (category < 0 || category >= static_cast<int>(inst.categories.size())) {
    throw PreconditionError("category index out of range");
  }
  const auto& items = inst.categories[category].items;
  const long size = static_cast<long>(items.size());
  const long n = inst.n_agents;
  if (d < 0 || size < d * n + 1) throw PreconditionError("pigeonhole bundle needs |C| >= d*n + 1");
  Bundle b;
  for (long j = d * (n - 1); j <= d * n; ++j) b.push_back(items[size - j - 1]);
  std::sort(b.begin(), b.end());
  return b;
}

AlgorithmResult approx_chores(const Instance& inst, const Rational& alpha, const BagFillingOptions& opts) {
  require_valid(inst);
  require_single_category(inst);
  if (inst.kind != Kind::Chores) throw PreconditionError("expected a chores instance");
  if (!is_ordered(inst)) throw PreconditionError("instance is not ordered");
  const int n = inst.n_agents;
  const Rational lo = (Rational(3) - Rational(1, std::max(n, 1))) / Rational(2);
  if (alpha < lo || alpha > Rational(3, 2)) {
    throw PreconditionError("alpha " + alpha.to_string() + " outside [" + lo.to_string() + ", 3/2]");
  }

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
  const std::vector<int> sizes = bag_sizes_chores(n, m, cat.q_minus, cat.q_plus);
  std::vector<PosSet> bags = initial_bags_chores(line, sizes);
  const std::vector<Rational> mu_hat = mu_hat_from_bags(line, bags);

  std::vector<int> remaining(n);
  for (int i = 0; i < n; ++i) remaining[i] = i;
  std::vector<Bundle> assigned;
  const bool want_state = opts.check_invariants || static_cast<bool>(opts.on_round);
  auto round_boundary = [&](int t) {
    if (!want_state) return;
    const BagState st = detail::to_state(line, t, bags, remaining, mu_hat, sizes);
    if (opts.on_round) opts.on_round(inst, st, assigned);
    if (opts.check_invariants) {
      if (auto bad = check_invariants_chores(inst, st, assigned, alpha)) {
        throw InternalInvariantError("condition " + *bad + " violated at t=" + std::to_string(t));
      }
    }
  };
  round_boundary(n);

  const Rational relaxed = alpha - Rational(1, 2);
  for (int t = n; t >= 1; --t) {
    const std::vector<PosSet> prev = bags;
    std::vector<PosSet> cur(bags.begin(), bags.begin() + (t - 1));
    PosSet bag = bags[t - 1];
    const int own = m - n + t;

    auto someone_content = [&] {
      for (int i : remaining) {
        if (line.value(i, bag) >= relaxed * mu_hat[i]) return true;
      }
      return false;
    };

    long steps = 0;
    for (int k = t - 1; k >= 1; --k) {
      const PosSet& bk_t = prev[k - 1];
      PosSet& bk = cur[k - 1];
      const int other_own = m - n + k;
      while (someone_content() && !detail::equal_without(bag, own, bk_t, other_own)) {
        if (++steps > static_cast<long>(m) * m + 8) throw InternalInvariantError("bag update does not terminate");
        // Only items that have not moved yet take part: g is the least valuable
        // item of B_k other than its special item that is still there, h the
        // most valuable item of B other than its special item that did not
        // come from B_k.
        auto it = bk.rbegin();
        while (it != bk.rend() && (*it == other_own || !bk_t.count(*it))) ++it;
        if (it == bk.rend()) throw InternalInvariantError("bag has no movable item");
        const int g = *it;
        bool swapped = false;
        if (bag.size() < bk_t.size()) {
          bk.erase(g);
          bag.insert(g);
        } else {
          auto jt = bag.begin();
          while (jt != bag.end() && (*jt == own || bk_t.count(*jt))) ++jt;
          if (jt == bag.end()) throw InternalInvariantError("bag has no item to swap out");
          const int h = *jt;
          bag.erase(h);
          bag.insert(g);
          bk.erase(g);
          bk.insert(h);
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

AlgorithmResult approx_chores(const Instance& inst) {
  return approx_chores(inst, default_alpha_chores(inst.n_agents));
}

}  // namespace mms
