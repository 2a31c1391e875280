#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mms/bag_state.hpp"
#include "mms/errors.hpp"

namespace mms::detail {

using PosSet = std::set<int>;

/// 1-based position view of a single-category instance.
class Line {
public:
  explicit Line(const Instance& inst) : inst_(inst), items_(inst.categories.at(0).items) {
    pos_.assign(inst.num_items(), 0);
    for (std::size_t j = 0; j < items_.size(); ++j) pos_[items_[j]] = static_cast<int>(j) + 1;
  }

  int m() const { return static_cast<int>(items_.size()); }
  int n() const { return inst_.n_agents; }
  int item(int position) const { return items_[position - 1]; }
  int position(int item) const { return pos_[item]; }
  const Rational& value(int agent, int position) const { return inst_.valuations[agent][items_[position - 1]]; }

  Rational value(int agent, const PosSet& s) const {
    Rational total;
    for (int p : s) total += value(agent, p);
    return total;
  }

  Bundle ids(const PosSet& s) const {
    Bundle b;
    for (int p : s) b.push_back(item(p));
    std::sort(b.begin(), b.end());
    return b;
  }

  PosSet positions(const Bundle& b) const {
    PosSet s;
    for (int g : b) s.insert(position(g));
    return s;
  }

private:
  const Instance& inst_;
  const std::vector<int>& items_;
  std::vector<int> pos_;
};

/// Sets equal after removing one designated element from each.
inline bool equal_without(const PosSet& a, int drop_a, const PosSet& b, int drop_b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (true) {
    if (ia != a.end() && *ia == drop_a) ++ia;
    if (ib != b.end() && *ib == drop_b) ++ib;
    if (ia == a.end() || ib == b.end()) return ia == a.end() && ib == b.end();
    if (*ia != *ib) return false;
    ++ia;
    ++ib;
  }
}

/// C1 and C2: bags and assigned bundles are disjoint and cover M.
inline std::optional<std::string> check_cover(const Instance& inst, const std::vector<Bundle>& bags,
                                              const std::vector<Bundle>& assigned) {
  std::vector<int> seen(inst.num_items(), 0);
  auto mark = [&](const Bundle& b) {
    for (int g : b) {
      if (g < 0 || g >= static_cast<int>(seen.size()) || seen[g]++ > 0) return false;
    }
    return true;
  };
  for (const auto& b : bags) {
    if (!mark(b)) return "C1";
  }
  for (const auto& b : assigned) {
    if (!mark(b)) return "C1";
  }
  for (int s : seen) {
    if (s == 0) return "C2";
  }
  return std::nullopt;
}

/// C5: for every remaining agent, every item of an earlier bag (special item
/// removed) is worth at most every item of a later one.
inline bool value_order_holds(const Line& line, const BagState& state, const std::vector<int>& special) {
  for (int i : state.remaining_agents) {
    std::optional<Rational> running_max;
    for (int k = 1; k <= state.t; ++k) {
      std::optional<Rational> lo, hi;
      for (int g : state.bags[k - 1]) {
        const int p = line.position(g);
        if (p == special[k - 1]) continue;
        const Rational& v = line.value(i, p);
        if (!lo || v < *lo) lo = v;
        if (!hi || v > *hi) hi = v;
      }
      if (!lo) continue;
      if (running_max && *lo < *running_max) return false;
      if (!running_max || *hi > *running_max) running_max = *hi;
    }
  }
  return true;
}

inline BagState to_state(const Line& line, int t, const std::vector<PosSet>& bags, const std::vector<int>& remaining,
                         const std::vector<Rational>& mu_hat, const std::vector<int>& sizes) {
  BagState st;
  st.t = t;
  for (int k = 0; k < t; ++k) st.bags.push_back(line.ids(bags[k]));
  st.remaining_agents = remaining;
  st.mu_hat = mu_hat;
  st.bag_sizes = sizes;
  return st;
}

}  // namespace mms::detail
