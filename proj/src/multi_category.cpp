#include "mms/multi_category.hpp"

#include <algorithm>
#include <set>

#include "mms/errors.hpp"

namespace mms {

Rational default_alpha_categorized_goods(int n) {
  const long k = std::max(n, 1);
  return Rational(k, 2 * k - 1);
}

Rational default_alpha_categorized_chores(int n) {
  const long k = std::max(n, 1);
  return Rational(2 * k - 1, k);
}

namespace {

void check_ordered(const Instance& inst, Kind kind) {
  require_valid(inst);
  if (inst.kind != kind) throw PreconditionError("expected a " + to_string(kind) + " instance");
  if (!is_ordered(inst)) throw PreconditionError("instance is not ordered");
}

ReductionResult reduce(const Instance& inst, int agent, const std::set<int>& bundle) {
  std::vector<int> agents;
  for (int i = 0; i < inst.n_agents; ++i) {
    if (i != agent) agents.push_back(i);
  }
  std::vector<int> items;
  for (int g = 0; g < inst.num_items(); ++g) {
    if (!bundle.count(g)) items.push_back(g);
  }
  return ReductionResult{Bundle(bundle.begin(), bundle.end()), restrict_instance(inst, agents, items)};
}

std::set<int> reduction_set(const Instance& inst, int cstar, int d) {
  const long n = inst.n_agents;
  std::set<int> b;
  for (std::size_t c = 0; c < inst.categories.size(); ++c) {
    const auto& cat = inst.categories[c];
    const long size = static_cast<long>(cat.items.size());
    long tail = std::max<long>(cat.q_minus, size - cat.q_plus * (n - 1));
    if (static_cast<int>(c) == cstar) {
      for (long j = d * (n - 1) + 1; j <= d * n + 1; ++j) b.insert(cat.items[j - 1]);
      tail -= d + 1;
    }
    for (long j = 0; j < tail; ++j) {
      const int g = cat.items[size - 1 - j];
      if (!b.insert(g).second) throw InternalInvariantError("reduction tail overlaps the leading block");
    }
  }
  return b;
}

Rational value_of(const Instance& inst, int agent, const std::vector<int>& items) {
  Rational s;
  for (int g : items) s += inst.valuations[agent][g];
  return s;
}

std::optional<std::string> check_common(const Instance& inst, const CategorizedState& state,
                                        const std::vector<Bundle>& assigned) {
  std::vector<int> seen(inst.num_items(), 0);
  auto mark = [&](const std::vector<int>& b) {
    for (int g : b) {
      if (g < 0 || g >= static_cast<int>(seen.size()) || seen[g]++ > 0) return false;
    }
    return true;
  };
  if (!mark(state.remaining_items)) return "C1";
  for (const auto& b : assigned) {
    if (!mark(b)) return "C1";
  }
  for (int s : seen) {
    if (s == 0) return "C2";
  }
  const auto cat = category_index(inst);
  std::vector<long> count(inst.categories.size(), 0);
  for (int g : state.remaining_items) ++count[cat[g]];
  for (std::size_t c = 0; c < count.size(); ++c) {
    const auto& C = inst.categories[c];
    if (count[c] < static_cast<long>(C.q_minus) * state.t || count[c] > static_cast<long>(C.q_plus) * state.t) {
      return "C3";
    }
  }
  return std::nullopt;
}

enum class Orientation { Goods, Chores };

AlgorithmResult run_categorized(const Instance& inst, const Rational& alpha, const CategorizedOptions& opts,
                                Orientation orient) {
  const int n = inst.n_agents;
  const int m = inst.num_items();
  AlgorithmResult res;
  res.allocation.bundles.assign(n, {});
  res.mu_hat.assign(n, std::nullopt);
  if (n == 0) return res;

  std::vector<Rational> mu_hat(n);
  for (int i = 0; i < n; ++i) {
    Rational total;
    for (const auto& x : inst.valuations[i]) total += x;
    mu_hat[i] = total / Rational(n);
    if (orient == Orientation::Chores) {
      for (const auto& x : inst.valuations[i]) mu_hat[i] = min(mu_hat[i], x);
    }
  }

  if (orient == Orientation::Goods) {
    for (int i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < inst.categories.size(); ++c) {
        const auto& items = inst.categories[c].items;
        if (items.empty() || inst.valuations[i][items.front()] < alpha * mu_hat[i]) continue;
        const auto red = reduce(inst, i, reduction_set(inst, static_cast<int>(c), 0));
        const AlgorithmResult sub = run_categorized(red.reduced.instance, alpha, opts, orient);
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
  }

  std::vector<char> in_rest(m, 1);
  std::vector<int> remaining(n);
  for (int i = 0; i < n; ++i) remaining[i] = i;
  std::vector<Bundle> assigned;

  auto state_at = [&](int t) {
    CategorizedState st;
    st.t = t;
    for (int g = 0; g < m; ++g) {
      if (in_rest[g]) st.remaining_items.push_back(g);
    }
    st.remaining_agents = remaining;
    st.mu_hat = mu_hat;
    return st;
  };
  auto round_boundary = [&](int t) {
    if (!opts.check_invariants && !opts.on_round) return;
    const CategorizedState st = state_at(t);
    if (opts.on_round) opts.on_round(inst, st, assigned);
    if (opts.check_invariants) {
      const auto bad = orient == Orientation::Goods ? check_invariants_categorized_goods(inst, st, assigned, alpha)
                                                    : check_invariants_categorized_chores(inst, st, assigned, alpha);
      if (bad) throw InternalInvariantError("condition " + *bad + " violated at t=" + std::to_string(t));
    }
  };
  round_boundary(n);

  for (int t = n; t >= 1; --t) {
    // Per category: positions (indices into the item list) still in M^(t).
    std::vector<std::vector<int>> rest(inst.categories.size());
    std::vector<std::set<int>> chosen(inst.categories.size());
    std::vector<Rational> vb(n);
    for (std::size_t c = 0; c < inst.categories.size(); ++c) {
      const auto& items = inst.categories[c].items;
      for (std::size_t j = 0; j < items.size(); ++j) {
        if (in_rest[items[j]]) rest[c].push_back(static_cast<int>(j));
      }
      const long sz = static_cast<long>(rest[c].size());
      const long seed = orient == Orientation::Goods ? sz / t : (sz + t - 1) / t;
      for (long j = sz - seed; j < sz; ++j) chosen[c].insert(rest[c][j]);
      for (int p : chosen[c]) {
        for (int i : remaining) vb[i] += inst.valuations[i][items[p]];
      }
    }

    auto all_short = [&] {
      for (int i : remaining) {
        if (vb[i] >= alpha * mu_hat[i]) return false;
      }
      return true;
    };

    for (std::size_t c = 0; c < inst.categories.size(); ++c) {
      const auto& items = inst.categories[c].items;
      const long sz = static_cast<long>(rest[c].size());
      const long fl = sz / t;
      const long ce = (sz + t - 1) / t;
      const long target = orient == Orientation::Goods ? ce : fl;
      auto at_target = [&] {
        if (static_cast<long>(chosen[c].size()) != target) return false;
        long j = 0;
        for (int p : chosen[c]) {
          if (p != rest[c][j++]) return false;
        }
        return true;
      };
      auto add = [&](int p) {
        chosen[c].insert(p);
        for (int i : remaining) vb[i] += inst.valuations[i][items[p]];
      };
      auto drop = [&](int p) {
        chosen[c].erase(p);
        for (int i : remaining) vb[i] -= inst.valuations[i][items[p]];
      };
      auto best_outside = [&] {
        for (int p : rest[c]) {
          if (!chosen[c].count(p)) return p;
        }
        throw InternalInvariantError("no item left to add");
      };

      long steps = 0;
      while (all_short() && !at_target()) {
        if (++steps > 2 * sz * sz + 8) throw InternalInvariantError("bag update does not terminate");
        if (orient == Orientation::Goods) {
          if (static_cast<long>(chosen[c].size()) == ce) drop(*chosen[c].rbegin());
          add(best_outside());
        } else {
          drop(*chosen[c].rbegin());
          if (static_cast<long>(chosen[c].size()) < fl) add(best_outside());
        }
      }
    }

    Bundle bag;
    for (std::size_t c = 0; c < inst.categories.size(); ++c) {
      for (int p : chosen[c]) bag.push_back(inst.categories[c].items[p]);
    }
    std::sort(bag.begin(), bag.end());
    if (opts.on_assign || opts.check_invariants) {
      const CategorizedState st = state_at(t);
      if (opts.on_assign) opts.on_assign(inst, st, bag);
      if (opts.check_invariants && !bag_within_bounds(inst, st, bag)) {
        throw InternalInvariantError("bag size bounds violated at t=" + std::to_string(t));
      }
    }

    int winner = -1;
    for (int i : remaining) {
      if (vb[i] >= alpha * mu_hat[i]) {
        winner = i;
        break;
      }
    }
    if (winner < 0) throw InternalInvariantError("no remaining agent accepts the bag at t=" + std::to_string(t));
    res.allocation.bundles[winner] = bag;
    res.mu_hat[winner] = mu_hat[winner];
    assigned.push_back(bag);
    for (int g : bag) in_rest[g] = 0;
    remaining.erase(std::find(remaining.begin(), remaining.end(), winner));
    round_boundary(t - 1);
  }
  return res;
}

}  // namespace

ReductionResult valid_reduction_bundle(const Instance& inst, int agent, int category, int d) {
  check_ordered(inst, Kind::Goods);
  if (agent < 0 || agent >= inst.n_agents) throw PreconditionError("agent index out of range");
  if (category < 0 || category >= static_cast<int>(inst.categories.size())) {
    throw PreconditionError("category index out of range");
  }
  const long size = static_cast<long>(inst.categories[category].items.size());
  if (size == 0) throw PreconditionError("category is empty");
  if (d < 0 || size < static_cast<long>(d) * inst.n_agents + 1) {
    throw PreconditionError("valid reduction needs |C*| >= d*n + 1");
  }
  return reduce(inst, agent, reduction_set(inst, category, d));
}

bool bag_within_bounds(const Instance& inst, const CategorizedState& state, const Bundle& bag) {
  if (state.t <= 0) return false;
  const auto cat = category_index(inst);
  std::vector<long> rest(inst.categories.size(), 0), in_bag(inst.categories.size(), 0);
  for (int g : state.remaining_items) ++rest[cat[g]];
  for (int g : bag) ++in_bag[cat[g]];
  for (std::size_t c = 0; c < rest.size(); ++c) {
    const long fl = rest[c] / state.t;
    const long ce = (rest[c] + state.t - 1) / state.t;
    if (in_bag[c] < fl || in_bag[c] > ce) return false;
  }
  return true;
}

std::optional<std::string> check_invariants_categorized_goods(const Instance& inst, const CategorizedState& state,
                                                              const std::vector<Bundle>& assigned,
                                                              const Rational& alpha) {
  if (auto bad = check_common(inst, state, assigned)) return bad;
  const Rational coef = Rational(state.t) - Rational(inst.n_agents - state.t) * (Rational(2) * alpha - Rational(1));
  for (int i : state.remaining_agents) {
    if (value_of(inst, i, state.remaining_items) < coef * state.mu_hat[i]) return "C4";
  }
  return std::nullopt;
}

std::optional<std::string> check_invariants_categorized_chores(const Instance& inst, const CategorizedState& state,
                                                               const std::vector<Bundle>& assigned,
                                                               const Rational& alpha) {
  if (auto bad = check_common(inst, state, assigned)) return bad;
  const Rational coef = Rational(state.t) + Rational(inst.n_agents - state.t) * (Rational(2) - alpha);
  for (int i : state.remaining_agents) {
    if (value_of(inst, i, state.remaining_items) < coef * state.mu_hat[i]) return "C4";
  }
  return std::nullopt;
}

AlgorithmResult approx_categorized_goods(const Instance& inst, const Rational& alpha,
                                         const CategorizedOptions& options) {
  check_ordered(inst, Kind::Goods);
  const int n = std::max(inst.n_agents, 1);
  const Rational hi = Rational(1) / (Rational(2) - Rational(1, n));
  if (alpha < Rational(1, 2) || alpha > hi) {
    throw PreconditionError("alpha " + alpha.to_string() + " outside [1/2, " + hi.to_string() + "]");
  }
  return run_categorized(inst, alpha, options, Orientation::Goods);
}

AlgorithmResult approx_categorized_goods(const Instance& inst) {
  return approx_categorized_goods(inst, default_alpha_categorized_goods(inst.n_agents));
}

AlgorithmResult approx_categorized_chores(const Instance& inst, const Rational& alpha,
                                          const CategorizedOptions& options) {
  check_ordered(inst, Kind::Chores);
  const int n = std::max(inst.n_agents, 1);
  const Rational lo = Rational(2) - Rational(1, n);
  if (alpha < lo || alpha > Rational(2)) {
    throw PreconditionError("alpha " + alpha.to_string() + " outside [" + lo.to_string() + ", 2]");
  }
  return run_categorized(inst, alpha, options, Orientation::Chores);
}

AlgorithmResult approx_categorized_chores(const Instance& inst) {
  return approx_categorized_chores(inst, default_alpha_categorized_chores(inst.n_agents));
}

}  // namespace mms
