#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "mms/errors.hpp"
#include "mms/json_io.hpp"
#include "mms/ordered.hpp"
#include "mms/verify.hpp"
#include "support/naive.hpp"

using namespace mms;
using naive::row;
using naive::single;

namespace {

bool mentions(const ValidationReport& rep, const std::string& text) {
  for (const auto& v : rep.violations) {
    if (v.find(text) != std::string::npos) return true;
  }
  return false;
}

Instance two_categories(int n, int size1, std::pair<int, int> q1, int size2, std::pair<int, int> q2,
                        std::vector<std::vector<Rational>> rows) {
  Instance inst;
  inst.n_agents = n;
  Category a{"A", {}, q1.first, q1.second}, b{"B", {}, q2.first, q2.second};
  for (int g = 0; g < size1; ++g) a.items.push_back(g);
  for (int g = 0; g < size2; ++g) b.items.push_back(size1 + g);
  inst.categories = {a, b};
  inst.valuations = std::move(rows);
  return inst;
}

}  // namespace

TEST_CASE("validate_instance accepts quotas tight at both bounds") {
  CHECK(validate_instance(single(2, 1, 2, {row({1, 1, 1, 1}), row({1, 1, 1, 1})})).ok());
}

TEST_CASE("validate_instance names the failed lower bound") {
  const auto rep = validate_instance(single(2, 2, 3, {row({1, 1, 1}), row({1, 1, 1})}));
  CHECK_FALSE(rep.ok());
  CHECK(mentions(rep, "q-*n=4 > |C|=3"));
}

TEST_CASE("validate_instance accepts exact quotas on two categories") {
  std::vector<std::vector<Rational>> rows(3, std::vector<Rational>(9, Rational(1)));
  CHECK(validate_instance(two_categories(3, 3, {1, 1}, 6, {2, 2}, rows)).ok());
}

TEST_CASE("validate_instance reports structural problems") {
  Instance inst = single(2, 0, 2, {row({1, 2}), row({1, 2})});
  SUBCASE("upper bound") {
    inst.categories[0].q_plus = 0;
    CHECK(mentions(validate_instance(inst), "|C|=2 > q+*n=0"));
  }
  SUBCASE("no agents") {
    inst.n_agents = 0;
    inst.valuations.clear();
    CHECK(mentions(validate_instance(inst), "number of agents"));
  }
  SUBCASE("duplicate item") {
    inst.categories[0].items = {0, 0};
    CHECK(mentions(validate_instance(inst), "more than one"));
    CHECK(mentions(validate_instance(inst), "item 1 belongs to no category"));
  }
  SUBCASE("negative goods value") {
    inst.valuations[1][0] = Rational(-1);
    CHECK(mentions(validate_instance(inst), "negative value"));
  }
  SUBCASE("positive chores value") {
    inst.kind = Kind::Chores;
    CHECK(mentions(validate_instance(inst), "positive value"));
  }
  SUBCASE("short row") {
    inst.valuations[0].pop_back();
    CHECK(mentions(validate_instance(inst), "valuation row 0"));
  }
  SUBCASE("q- above q+") {
    inst.categories[0].q_minus = 3;
    inst.categories[0].q_plus = 2;
    CHECK(mentions(validate_instance(inst), "q-=3 > q+=2"));
  }
  SUBCASE("require_valid throws") {
    inst.categories[0].q_plus = 0;
    CHECK_THROWS_AS(require_valid(inst), InvalidInstance);
  }
}

TEST_CASE("is_feasible_bundle counts per category") {
  const Instance inst = single(2, 1, 2, {row({1, 1, 1, 1}), row({1, 1, 1, 1})});
  CHECK(is_feasible_bundle(inst, {0, 1}));
  CHECK_FALSE(is_feasible_bundle(inst, {0, 1, 2}));
  CHECK_FALSE(is_feasible_bundle(inst, {}));
  CHECK_THROWS_WITH_AS(is_feasible_bundle(inst, {7}), doctest::Contains("item not in instance"), PreconditionError);

  std::vector<std::vector<Rational>> rows(2, std::vector<Rational>(4, Rational(1)));
  const Instance two = two_categories(2, 2, {1, 1}, 2, {1, 1}, rows);
  CHECK(is_feasible_bundle(two, {0, 2}));
  CHECK_FALSE(is_feasible_bundle(two, {0, 1}));
}

TEST_CASE("is_feasible_allocation") {
  const Instance inst = single(2, 2, 2, {row({1, 1, 1, 1}), row({1, 1, 1, 1})});
  CHECK(is_feasible_allocation(inst, Allocation{{{0, 1}, {2, 3}}}));
  CHECK_FALSE(is_feasible_allocation(inst, Allocation{{{0, 1, 2}, {3}}}));
  CHECK_THROWS_WITH_AS(is_feasible_allocation(inst, Allocation{{{0, 1}, {1, 2, 3}}}),
                       doctest::Contains("not a partition"), PreconditionError);
  CHECK_THROWS_AS(is_feasible_allocation(inst, Allocation{{{0, 1}, {2}}}), PreconditionError);

  const Instance one = single(1, 1, 3, {row({1, 2, 3})});
  CHECK(is_feasible_allocation(one, Allocation{{{0, 1, 2}}}));
  const Instance tight = single(1, 1, 2, {row({1, 2, 3})});
  CHECK_THROWS_AS(require_valid(tight), InvalidInstance);
}

TEST_CASE("is_feasible_allocation agrees with direct counting on every assignment") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 2 + rep % 2;
    const Instance inst = naive::random_unordered(rng, n, {3, 1 + rep % 3}, 0, 3, Kind::Goods);
    const auto cat = naive::category_of(inst);
    const int m = inst.num_items();
    std::vector<int> a(m, 0);
    while (true) {
      const Allocation alloc = naive::to_allocation(n, a);
      CHECK(is_feasible_allocation(inst, alloc) == naive::feasible_assignment(inst, cat, a));
      int pos = m - 1;
      while (pos >= 0 && a[pos] == n - 1) a[pos--] = 0;
      if (pos < 0) break;
      ++a[pos];
    }
  }
}

TEST_CASE("bundle_value") {
  const Instance inst = single(1, 0, 3, {row({3, 2, 1})});
  CHECK(bundle_value(inst, 0, {0, 2}) == Rational(4));
  CHECK(bundle_value(inst, 0, {}) == Rational(0));
  const Instance chores = single(1, 0, 2, {{Rational(-1, 2), Rational(-1, 2)}}, Kind::Chores);
  CHECK(bundle_value(chores, 0, {0, 1}) == Rational(-1));
  CHECK_THROWS(bundle_value(inst, 3, {0}));
}

TEST_CASE("to_ordered sorts each agent's values within the category") {
  const Instance inst = single(2, 1, 2, {row({1, 3, 2}), row({2, 1, 3})});
  const OrderedReduction red = to_ordered(inst);
  CHECK(red.ordered_instance.valuations[0] == row({3, 2, 1}));
  CHECK(red.ordered_instance.valuations[1] == row({3, 2, 1}));
  CHECK(red.ordered_instance.categories[0].items == inst.categories[0].items);
  CHECK(red.original_instance.valuations == inst.valuations);
  CHECK(is_ordered(red.ordered_instance));
  CHECK_FALSE(is_ordered(inst));

  const Instance again = to_ordered(red.ordered_instance).ordered_instance;
  CHECK(again.valuations == red.ordered_instance.valuations);
}

TEST_CASE("to_ordered handles categories independently") {
  const Instance inst = two_categories(2, 2, {1, 1}, 3, {1, 2}, {row({1, 5, 0, 2, 1}), row({4, 4, 3, 1, 2})});
  const Instance ord = to_ordered(inst).ordered_instance;
  CHECK(ord.valuations[0] == row({5, 1, 2, 1, 0}));
  CHECK(ord.valuations[1] == row({4, 4, 3, 2, 1}));
}

TEST_CASE("lift_allocation follows the position order") {
  const Instance inst = single(2, 1, 2, {row({1, 3, 2}), row({2, 1, 3})});
  const OrderedReduction red = to_ordered(inst);
  const Allocation ordered_alloc{{{0}, {1, 2}}};
  const Allocation lifted = lift_allocation(red, ordered_alloc);
  // Position 1 goes to agent 0, which takes item 1 (value 3); agent 1 then takes 2 and 0.
  CHECK(lifted == Allocation{{{1}, {0, 2}}});
  CHECK(bundle_value(inst, 0, lifted.bundles[0]) >= bundle_value(red.ordered_instance, 0, ordered_alloc.bundles[0]));
  CHECK(bundle_value(inst, 1, lifted.bundles[1]) >= bundle_value(red.ordered_instance, 1, ordered_alloc.bundles[1]));
  CHECK_THROWS_AS(lift_allocation(red, Allocation{{{0, 1, 2}, {}}}), PreconditionError);
}

TEST_CASE("lift_allocation with identical agents keeps bundle values") {
  const Instance inst = single(2, 1, 3, {row({1, 4, 2, 3}), row({1, 4, 2, 3})});
  const OrderedReduction red = to_ordered(inst);
  const Allocation ordered_alloc{{{0, 3}, {1, 2}}};
  const Allocation lifted = lift_allocation(red, ordered_alloc);
  for (int i = 0; i < 2; ++i) {
    CHECK(bundle_value(inst, i, lifted.bundles[i]) == bundle_value(red.ordered_instance, i, ordered_alloc.bundles[i]));
  }
}

TEST_CASE("lift_allocation preserves counts and never loses value on random 3-category instances") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 2 + rep % 2;
    const Instance inst = naive::random_unordered(rng, n, {2, 3, 2}, 0, 5, Kind::Goods);
    const OrderedReduction red = to_ordered(inst);
    // Random feasible ordered allocation: pick the k-th feasible assignment.
    std::vector<std::vector<int>> all;
    naive::for_each_feasible(red.ordered_instance, [&](const std::vector<int>& a) { all.push_back(a); });
    REQUIRE_FALSE(all.empty());
    const auto& a = all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
    const Allocation oa = naive::to_allocation(n, a);
    const Allocation la = lift_allocation(red, oa);
    CHECK(is_feasible_allocation(inst, la));
    const auto cat = naive::category_of(inst);
    for (int i = 0; i < n; ++i) {
      CHECK(bundle_value(inst, i, la.bundles[i]) >= bundle_value(red.ordered_instance, i, oa.bundles[i]));
      for (int c = 0; c < 3; ++c) {
        auto count = [&](const Bundle& b) { return std::count_if(b.begin(), b.end(), [&](int g) { return cat[g] == c; }); };
        CHECK(count(la.bundles[i]) == count(oa.bundles[i]));
      }
    }
  }
}

TEST_CASE("verify_alpha_mms") {
  const Instance inst = single(2, 1, 3, {row({3, 1, 1, 1}), row({2, 2, 1, 1})});
  const Allocation alloc{{{0}, {1, 2, 3}}};
  SUBCASE("alpha zero on goods") {
    const auto rep = verify_alpha_mms(inst, alloc, Rational(0), {Rational(3), Rational(3)});
    CHECK(rep.ok);
  }
  SUBCASE("margins") {
    const auto rep = verify_alpha_mms(inst, alloc, Rational(1), {Rational(3), Rational(3)});
    CHECK(rep.ok);
    CHECK(rep.agents[0].margin == Rational(0));
    CHECK(rep.agents[1].margin == Rational(1));
    CHECK(rep.min_margin == Rational(0));
    const auto bad = verify_alpha_mms(inst, alloc, Rational(1), {Rational(3), Rational(5)});
    CHECK_FALSE(bad.ok);
    CHECK(bad.min_margin == Rational(-1));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(verify_alpha_mms(inst, alloc, Rational(1), {Rational(3)}), PreconditionError);
    const Instance q22 = single(2, 2, 2, {row({1, 1, 1, 1}), row({1, 1, 1, 1})});
    CHECK_THROWS_AS(verify_alpha_mms(q22, alloc, Rational(1), {Rational(2), Rational(2)}), PreconditionError);
  }
}

TEST_CASE("restrict_instance re-indexes and keeps categories") {
  const Instance inst = two_categories(2, 2, {0, 2}, 2, {0, 2}, {row({1, 2, 3, 4}), row({5, 6, 7, 8})});
  const SubInstance sub = restrict_instance(inst, {1}, {3, 1});
  CHECK(sub.instance.n_agents == 1);
  CHECK(sub.agent_map == std::vector<int>{1});
  CHECK(sub.item_map == std::vector<int>{1, 3});
  CHECK(sub.instance.valuations[0] == row({6, 8}));
  REQUIRE(sub.instance.categories.size() == 2);
  CHECK(sub.instance.categories[0].items == std::vector<int>{0});
  CHECK(sub.instance.categories[1].items == std::vector<int>{1});
}

TEST_CASE("json round trip and errors") {
  Instance inst = single(2, 1, 2, {{Rational(3, 5), Rational(2), Rational(0)}, row({1, 1, 1})});
  const nlohmann::json j = instance_to_json(inst);
  CHECK(j["valuations"][0][0] == "3/5");
  const Instance back = instance_from_json(j);
  CHECK(back.valuations == inst.valuations);
  CHECK(back.categories[0].items == inst.categories[0].items);
  CHECK(back.kind == Kind::Goods);

  const Allocation a{{{0, 2}, {1}}};
  CHECK(allocation_from_json(allocation_to_json(a)) == a);

  CHECK(rational_from_json(nlohmann::json(4)) == Rational(4));
  CHECK_THROWS_AS(rational_from_json(nlohmann::json(0.5)), InvalidInstance);
  CHECK_THROWS_AS(rational_from_json(nlohmann::json("x/y")), InvalidInstance);
  CHECK_THROWS_AS(instance_from_json(nlohmann::json::object()), InvalidInstance);
  nlohmann::json bad = j;
  bad["kind"] = "money";
  CHECK_THROWS_AS(instance_from_json(bad), InvalidInstance);
  bad = j;
  bad["categories"][0].erase("q_plus");
  CHECK_THROWS_WITH_AS(instance_from_json(bad), doctest::Contains("q_plus"), InvalidInstance);

  const auto report = rational_report(Rational(1, 4));
  CHECK(report["value"] == "1/4");
  CHECK(report["decimal"] == 0.25);

  const auto path = (std::filesystem::temp_directory_path() / "mms_core_roundtrip.json").string();
  write_json_file(path, j);
  CHECK(instance_from_json(read_json_file(path)).valuations == inst.valuations);
  CHECK_THROWS_AS(read_json_file(path + ".missing"), Error);
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(read_json_file(path), InvalidInstance);
  std::filesystem::remove(path);
}

TEST_CASE("instance predicates") {
  const Instance inst = single(2, 0, 2, {row({1, 0}), row({1, 0})});
  CHECK(identical_agents(inst));
  CHECK(all_nonnegative(inst));
  CHECK_FALSE(all_nonpositive(inst));
  CHECK(parse_kind("chores") == Kind::Chores);
  CHECK(to_string(Kind::Mixed) == "mixed");
  CHECK_THROWS_AS(parse_kind("money"), InvalidInstance);
  CHECK(sorted({3, 1, 2}) == Bundle{1, 2, 3});
}
