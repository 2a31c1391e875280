#include "mms/ordered.hpp"

#include <algorithm>

#include "mms/errors.hpp"

namespace mms {

OrderedReduction to_ordered(const Instance& inst) {
  OrderedReduction red{inst, inst};
  for (int i = 0; i < inst.n_agents; ++i) {
    auto& row = red.ordered_instance.valuations[i];
    for (const auto& c : inst.categories) {
      std::vector<int> ids = c.items;
      std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
        const auto& va = inst.valuations[i][a];
        const auto& vb = inst.valuations[i][b];
        return va != vb ? va > vb : a < b;
      });
      for (std::size_t j = 0; j < c.items.size(); ++j) row[c.items[j]] = inst.valuations[i][ids[j]];
    }
  }
  return red;
}

Allocation lift_allocation(const OrderedReduction& reduction, const Allocation& ordered_alloc) {
  const Instance& ord = reduction.ordered_instance;
  const Instance& orig = reduction.original_instance;
  if (!is_feasible_allocation(ord, ordered_alloc)) {
    throw PreconditionError("allocation is infeasible for the ordered instance");
  }
  std::vector<int> holder(ord.num_items(), -1);
  for (std::size_t i = 0; i < ordered_alloc.bundles.size(); ++i) {
    for (int g : ordered_alloc.bundles[i]) holder[g] = static_cast<int>(i);
  }

  Allocation out;
  out.bundles.assign(orig.n_agents, {});
  for (const auto& c : orig.categories) {
    // Per agent, the category's items by descending own value, with a cursor
    // that only moves forward past items already taken.
    std::vector<std::vector<int>> pref(orig.n_agents);
    std::vector<std::size_t> cursor(orig.n_agents, 0);
    std::vector<char> taken(orig.num_items(), 0);
    auto prefs_of = [&](int i) -> const std::vector<int>& {
      if (pref[i].empty() && !c.items.empty()) {
        pref[i] = c.items;
        std::stable_sort(pref[i].begin(), pref[i].end(), [&](int a, int b) {
          const auto& va = orig.valuations[i][a];
          const auto& vb = orig.valuations[i][b];
          return va != vb ? va > vb : a < b;
        });
      }
      return pref[i];
    };
    for (int pos_item : c.items) {
      const int i = holder[pos_item];
      const auto& p = prefs_of(i);
      while (taken[p[cursor[i]]]) ++cursor[i];
      const int g = p[cursor[i]];
      taken[g] = 1;
      out.bundles[i].push_back(g);
    }
  }
  for (auto& b : out.bundles) std::sort(b.begin(), b.end());
  return out;
}

}  // namespace mms
