#include "mms/instance.hpp"

#include <algorithm>
#include <sstream>

#include "mms/errors.hpp"

namespace mms {

std::string to_string(Kind kind) {
  switch (kind) {
    case Kind::Goods: return "goods";
    case Kind::Chores: return "chores";
    case Kind::Mixed: return "mixed";
  }
  return "unknown";
}

Kind parse_kind(const std::string& text) {
  if (text == "goods") return Kind::Goods;
  if (text == "chores") return Kind::Chores;
  if (text == "mixed") return Kind::Mixed;
  throw InvalidInstance("unknown kind '" + text + "'");
}

int Instance::num_items() const {
  if (!valuations.empty()) return static_cast<int>(valuations.front().size());
  int m = 0;
  for (const auto& c : categories) m += static_cast<int>(c.items.size());
  return m;
}

ValidationReport validate_instance(const Instance& inst) {
  ValidationReport report;
  auto& v = report.violations;
  if (inst.n_agents <= 0) v.push_back("number of agents must be positive, got " + std::to_string(inst.n_agents));
  if (static_cast<int>(inst.valuations.size()) != inst.n_agents) {
    v.push_back("expected " + std::to_string(inst.n_agents) + " valuation rows, got " +
                std::to_string(inst.valuations.size()));
  }
  int m = 0;
  for (const auto& c : inst.categories) m += static_cast<int>(c.items.size());
  for (std::size_t i = 0; i < inst.valuations.size(); ++i) {
    if (static_cast<int>(inst.valuations[i].size()) != m) {
      v.push_back("valuation row " + std::to_string(i) + " has " + std::to_string(inst.valuations[i].size()) +
                  " entries, expected " + std::to_string(m));
    }
  }

  std::vector<int> seen(m, 0);
  for (const auto& c : inst.categories) {
    for (int g : c.items) {
      if (g < 0 || g >= m) {
        v.push_back("category '" + c.name + "': item id " + std::to_string(g) + " out of range 0.." +
                    std::to_string(m - 1));
      } else if (seen[g]++ > 0) {
        v.push_back("item " + std::to_string(g) + " appears in more than one category position");
      }
    }
  }
  for (int g = 0; g < m; ++g) {
    if (seen[g] == 0) v.push_back("item " + std::to_string(g) + " belongs to no category");
  }

  const long n = inst.n_agents;
  for (const auto& c : inst.categories) {
    const long size = static_cast<long>(c.items.size());
    if (c.q_minus < 0 || c.q_plus < 0) {
      v.push_back("category '" + c.name + "': quotas must be non-negative");
      continue;
    }
    if (c.q_minus > c.q_plus) {
      v.push_back("category '" + c.name + "': q-=" + std::to_string(c.q_minus) + " > q+=" +
                  std::to_string(c.q_plus));
    }
    if (n > 0 && c.q_minus * n > size) {
      v.push_back("category '" + c.name + "': q-*n=" + std::to_string(c.q_minus * n) + " > |C|=" +
                  std::to_string(size));
    }
    if (n > 0 && size > c.q_plus * n) {
      v.push_back("category '" + c.name + "': |C|=" + std::to_string(size) + " > q+*n=" +
                  std::to_string(c.q_plus * n));
    }
  }

  for (std::size_t i = 0; i < inst.valuations.size(); ++i) {
    for (std::size_t g = 0; g < inst.valuations[i].size(); ++g) {
      const int s = inst.valuations[i][g].sign();
      if (inst.kind == Kind::Goods && s < 0) {
        v.push_back("goods instance has negative value for agent " + std::to_string(i) + ", item " +
                    std::to_string(g));
      } else if (inst.kind == Kind::Chores && s > 0) {
        v.push_back("chores instance has positive value for agent " + std::to_string(i) + ", item " +
                    std::to_string(g));
      }
    }
  }
  return report;
}

void require_valid(const Instance& inst) {
  const auto report = validate_instance(inst);
  if (report.ok()) return;
  std::ostringstream os;
  os << "invalid instance:";
  for (const auto& s : report.violations) os << "\n  " << s;
  throw InvalidInstance(os.str());
}

std::vector<int> category_index(const Instance& inst) {
  std::vector<int> idx(inst.num_items(), -1);
  for (std::size_t c = 0; c < inst.categories.size(); ++c) {
    for (int g : inst.categories[c].items) {
      if (g >= 0 && g < static_cast<int>(idx.size())) idx[g] = static_cast<int>(c);
    }
  }
  return idx;
}

bool is_feasible_bundle(const Instance& inst, const Bundle& bundle) {
  const auto cat = category_index(inst);
  std::vector<int> count(inst.categories.size(), 0);
  for (int g : bundle) {
    if (g < 0 || g >= static_cast<int>(cat.size()) || cat[g] < 0) {
      throw PreconditionError("item not in instance: " + std::to_string(g));
    }
    ++count[cat[g]];
  }
  for (std::size_t c = 0; c < count.size(); ++c) {
    if (count[c] < inst.categories[c].q_minus || count[c] > inst.categories[c].q_plus) return false;
  }
  return true;
}

bool is_partition(const Instance& inst, const Allocation& alloc) {
  if (static_cast<int>(alloc.bundles.size()) != inst.n_agents) return false;
  const int m = inst.num_items();
  std::vector<int> seen(m, 0);
  for (const auto& b : alloc.bundles) {
    for (int g : b) {
      if (g < 0 || g >= m || seen[g]++ > 0) return false;
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
}

bool is_feasible_allocation(const Instance& inst, const Allocation& alloc) {
  if (!is_partition(inst, alloc)) throw PreconditionError("not a partition");
  return std::all_of(alloc.bundles.begin(), alloc.bundles.end(),
                     [&](const Bundle& b) { return is_feasible_bundle(inst, b); });
}

Rational bundle_value(const Instance& inst, int agent, const Bundle& bundle) {
  if (agent < 0 || agent >= static_cast<int>(inst.valuations.size())) {
    throw PreconditionError("agent index out of range: " + std::to_string(agent));
  }
  const auto& row = inst.valuations[agent];
  Rational total;
  for (int g : bundle) {
    if (g < 0 || g >= static_cast<int>(row.size())) {
      throw PreconditionError("item not in instance: " + std::to_string(g));
    }
    total += row[g];
  }
  return total;
}

bool is_ordered(const Instance& inst) {
  for (const auto& row : inst.valuations) {
    for (const auto& c : inst.categories) {
      for (std::size_t j = 1; j < c.items.size(); ++j) {
        if (row[c.items[j - 1]] < row[c.items[j]]) return false;
      }
    }
  }
  return true;
}

bool identical_agents(const Instance& inst) {
  for (std::size_t i = 1; i < inst.valuations.size(); ++i) {
    if (inst.valuations[i] != inst.valuations[0]) return false;
  }
  return true;
}

bool all_nonnegative(const Instance& inst) {
  for (const auto& row : inst.valuations) {
    for (const auto& x : row) {
      if (x.sign() < 0) return false;
    }
  }
  return true;
}

bool all_nonpositive(const Instance& inst) {
  for (const auto& row : inst.valuations) {
    for (const auto& x : row) {
      if (x.sign() > 0) return false;
    }
  }
  return true;
}

SubInstance restrict_instance(const Instance& inst, const std::vector<int>& agents,
                              const std::vector<int>& items) {
  SubInstance sub;
  sub.agent_map = agents;
  sub.item_map = items;
  std::sort(sub.item_map.begin(), sub.item_map.end());
  std::vector<int> new_id(inst.num_items(), -1);
  for (std::size_t g = 0; g < sub.item_map.size(); ++g) new_id[sub.item_map[g]] = static_cast<int>(g);

  Instance& out = sub.instance;
  out.n_agents = static_cast<int>(agents.size());
  out.kind = inst.kind;
  for (const auto& c : inst.categories) {
    Category nc{c.name, {}, c.q_minus, c.q_plus};
    for (int g : c.items) {
      if (new_id[g] >= 0) nc.items.push_back(new_id[g]);
    }
    out.categories.push_back(std::move(nc));
  }
  for (int a : agents) {
    std::vector<Rational> row;
    row.reserve(sub.item_map.size());
    for (int g : sub.item_map) row.push_back(inst.valuations[a][g]);
    out.valuations.push_back(std::move(row));
  }
  return sub;
}

Bundle sorted(Bundle bundle) {
  std::sort(bundle.begin(), bundle.end());
  return bundle;
}

}  // namespace mms
