#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mms/rational.hpp"

namespace mms {

enum class Kind { Goods, Chores, Mixed };

std::string to_string(Kind kind);
/// Accepts "goods", "chores" or "mixed".
Kind parse_kind(const std::string& text);

using Bundle = std::vector<int>;

struct Category {
  std::string name;
  /// Item ids in position order; position j holds g_{j+1}.
  std::vector<int> items;
  int q_minus = 0;
  int q_plus = 0;
};

struct Instance {
  int n_agents = 0;
  Kind kind = Kind::Goods;
  std::vector<Category> categories;
  /// valuations[i][g] is agent i's value for item g.
  std::vector<std::vector<Rational>> valuations;

  int num_items() const;
  const Rational& value(int agent, int item) const { return valuations[agent][item]; }
};

struct Allocation {
  std::vector<Bundle> bundles;

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_instance(const Instance& inst);

/// Throws InvalidInstance listing every violation.
void require_valid(const Instance& inst);

/// Category index of every item; -1 for ids not covered by any category.
std::vector<int> category_index(const Instance& inst);

/// Throws PreconditionError("item not in instance") on unknown ids.
bool is_feasible_bundle(const Instance& inst, const Bundle& bundle);

/// Throws PreconditionError("not a partition") unless the bundles partition M.
bool is_feasible_allocation(const Instance& inst, const Allocation& alloc);

/// True iff the bundles are disjoint and cover every item exactly once.
bool is_partition(const Instance& inst, const Allocation& alloc);

Rational bundle_value(const Instance& inst, int agent, const Bundle& bundle);

/// Every agent's values are non-increasing along each category's item list.
bool is_ordered(const Instance& inst);

bool identical_agents(const Instance& inst);

/// Value range of the instance: all values are >= 0, <= 0, or neither.
bool all_nonnegative(const Instance& inst);
bool all_nonpositive(const Instance& inst);

/// An instance restricted to a subset of agents and items, re-indexed from 0.
struct SubInstance {
  Instance instance;
  /// agent_map[a] is the id of sub-agent a in the parent instance.
  std::vector<int> agent_map;
  /// item_map[g] is the id of sub-item g in the parent instance.
  std::vector<int> item_map;
};

/// Keeps the listed agents (in the given order) and items. Items keep their
/// relative id order; categories keep their order and quotas, possibly empty.
SubInstance restrict_instance(const Instance& inst, const std::vector<int>& agents,
                              const std::vector<int>& items);

/// Sorted copy of a bundle.
Bundle sorted(Bundle bundle);

}  // namespace mms
