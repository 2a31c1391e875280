#include <doctest.h>

#include "mms/errors.hpp"
#include "mms/exact_oracles.hpp"
#include "mms/generators.hpp"
#include "mms/ordered.hpp"
#include "support/naive.hpp"

using namespace mms;
using naive::row;

namespace {

std::vector<Rational> values_in_order(const Instance& inst, int agent) {
  std::vector<Rational> out;
  for (int g : inst.categories[0].items) out.push_back(inst.valuations[agent][g]);
  return out;
}

}  // namespace

TEST_CASE("tight_goods_instance values") {
  const Instance i2 = tight_goods_instance(2);
  CHECK(i2.n_agents == 2);
  REQUIRE(i2.categories.size() == 1);
  CHECK(i2.categories[0].q_minus == 3);
  CHECK(i2.categories[0].q_plus == 3);
  const std::vector<Rational> expected{Rational(3, 5), Rational(2, 5), Rational(2, 5),
                                       Rational(2, 5), Rational(1, 5), Rational(0)};
  CHECK(values_in_order(i2, 0) == expected);
  CHECK(values_in_order(i2, 1) == expected);

  const Instance i1 = tight_goods_instance(1);
  CHECK(i1.num_items() == 3);
  Rational total;
  for (const auto& x : i1.valuations[0]) total += x;
  CHECK(total == Rational(1));
  CHECK(naive::mms(i1, 0) == Rational(1));

  CHECK_THROWS_AS(tight_goods_instance(0), PreconditionError);
}

TEST_CASE("tight_chores_instance values") {
  const Instance i2 = tight_chores_instance(2);
  REQUIRE(i2.categories.size() == 1);
  CHECK(i2.categories[0].q_minus == 1);
  CHECK(i2.categories[0].q_plus == 3);
  CHECK(i2.kind == Kind::Chores);
  CHECK(values_in_order(i2, 0) == std::vector<Rational>{Rational(-1, 4), Rational(-1, 2), Rational(-1, 2),
                                                        Rational(-3, 4)});
  // Pairing g_k with g_{2n+1-k} gives bundles worth exactly -1.
  for (int n = 1; n <= 5; ++n) {
    const Instance inst = tight_chores_instance(n);
    const auto v = values_in_order(inst, 0);
    for (int k = 0; k < n; ++k) CHECK(v[k] + v[2 * n - 1 - k] == Rational(-1));
  }
  CHECK_THROWS_AS(tight_chores_instance(0), PreconditionError);
}

TEST_CASE("tight families have oracle MMS 1 and -1") {
  for (int n = 1; n <= 4; ++n) {
    const Instance g = tight_goods_instance(n);
    const Instance c = tight_chores_instance(n);
    for (int i = 0; i < n; ++i) {
      if (n <= 3) {
        CHECK(naive::mms(g, i) == Rational(1));
      } else {
        CHECK(mms_bruteforce(g, i, 1e13).value == Rational(1));
      }
      CHECK(naive::mms(c, i) == Rational(-1));
    }
  }
}

TEST_CASE("tight families validate, are ordered and have non-increasing values") {
  for (int n = 1; n <= 8; ++n) {
    for (const Instance& inst : {tight_goods_instance(n), tight_chores_instance(n)}) {
      CHECK(validate_instance(inst).ok());
      CHECK(is_ordered(inst));
      CHECK(identical_agents(inst));
      const auto v = values_in_order(inst, 0);
      for (std::size_t j = 1; j < v.size(); ++j) CHECK(v[j - 1] >= v[j]);
    }
    CHECK(tight_goods_instance(n).num_items() == 3 * n);
    CHECK(tight_chores_instance(n).num_items() == 2 * n);
  }
}

TEST_CASE("shuffled tight instances keep the multiset of values") {
  for (int n = 2; n <= 5; ++n) {
    const Instance plain = tight_goods_instance(n);
    const Instance shuffled = tight_goods_instance(n, true, 17);
    CHECK(validate_instance(shuffled).ok());
    CHECK(to_ordered(shuffled).ordered_instance.valuations == plain.valuations);
    CHECK(tight_goods_instance(n, true, 17).valuations == shuffled.valuations);
    const Instance chores = tight_chores_instance(n, true, 5);
    CHECK(to_ordered(chores).ordered_instance.valuations == tight_chores_instance(n).valuations);
  }
  bool any_unordered = false;
  for (std::uint64_t seed = 0; seed < 10; ++seed) any_unordered |= !is_ordered(tight_goods_instance(4, true, seed));
  CHECK(any_unordered);
}

TEST_CASE("random_instance is reproducible") {
  const Instance a = random_instance(9, 3, {4, 5}, QuotaPolicy::Loose, std::nullopt, Kind::Goods);
  const Instance b = random_instance(9, 3, {4, 5}, QuotaPolicy::Loose, std::nullopt, Kind::Goods);
  CHECK(a.valuations == b.valuations);
  CHECK(a.categories.size() == b.categories.size());
  for (std::size_t c = 0; c < a.categories.size(); ++c) {
    CHECK(a.categories[c].items == b.categories[c].items);
    CHECK(a.categories[c].q_minus == b.categories[c].q_minus);
    CHECK(a.categories[c].q_plus == b.categories[c].q_plus);
  }
  bool differs = false;
  for (std::uint64_t s = 10; s < 20 && !differs; ++s) {
    differs = random_instance(s, 3, {4, 5}, QuotaPolicy::Loose, std::nullopt, Kind::Goods).valuations != a.valuations;
  }
  CHECK(differs);
}

TEST_CASE("random_instance quota policies") {
  const Instance u = random_instance(1, 3, {4, 2}, QuotaPolicy::Unconstrained, std::nullopt, Kind::Goods);
  for (const auto& c : u.categories) {
    CHECK(c.q_minus == 0);
    CHECK(c.q_plus == 6);
  }
  const Instance t = random_instance(1, 3, {6, 3}, QuotaPolicy::Tight, std::nullopt, Kind::Chores);
  CHECK(t.categories[0].q_minus == 2);
  CHECK(t.categories[0].q_plus == 2);
  CHECK(t.categories[1].q_minus == 1);
  CHECK(t.categories[1].q_plus == 1);
  const Instance t2 = random_instance(1, 3, {7}, QuotaPolicy::Tight, std::nullopt, Kind::Goods);
  CHECK(t2.categories[0].q_minus == 2);
  CHECK(t2.categories[0].q_plus == 3);
  const Instance lo = random_instance(1, 2, {5}, QuotaPolicy::LowerOnly, std::nullopt, Kind::Goods);
  CHECK(lo.categories[0].q_minus == 2);
  CHECK(lo.categories[0].q_plus == 5);
  const Instance up = random_instance(1, 2, {5}, QuotaPolicy::UpperOnly, std::nullopt, Kind::Goods);
  CHECK(up.categories[0].q_minus == 0);
  CHECK(up.categories[0].q_plus == 3);

  for (const char* name : {"tight", "loose", "lower-only", "upper-only", "unconstrained"}) {
    CHECK(to_string(parse_quota_policy(name)) == name);
  }
  CHECK_THROWS_AS(parse_quota_policy("strict"), PreconditionError);
}

TEST_CASE("random_instance always validates and respects the value range") {
  const std::vector<QuotaPolicy> policies{QuotaPolicy::Tight, QuotaPolicy::Loose, QuotaPolicy::LowerOnly,
                                          QuotaPolicy::UpperOnly, QuotaPolicy::Unconstrained};
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = 1 + static_cast<int>(seed % 4);
    const std::vector<int> sizes{static_cast<int>(seed % 7), 1 + static_cast<int>(seed % 5)};
    const Kind kind = seed % 3 == 0 ? Kind::Goods : seed % 3 == 1 ? Kind::Chores : Kind::Mixed;
    const Instance inst = random_instance(seed, n, sizes, policies[seed % 5], std::nullopt, kind);
    CHECK(validate_instance(inst).ok());
    CHECK(inst.num_items() == sizes[0] + sizes[1]);
    const long lo = kind == Kind::Goods ? 0 : -8, hi = kind == Kind::Chores ? 0 : 8;
    for (const auto& r : inst.valuations) {
      for (const auto& x : r) {
        CHECK(x >= Rational(lo));
        CHECK(x <= Rational(hi));
        CHECK(x.is_integer());
      }
    }
    const Instance narrow = random_instance(seed, n, sizes, policies[seed % 5], std::make_pair(2, 3), Kind::Goods);
    for (const auto& r : narrow.valuations) {
      for (const auto& x : r) CHECK((x == Rational(2) || x == Rational(3)));
    }
  }
}

TEST_CASE("random_instance errors") {
  CHECK_THROWS_AS(random_instance(0, 0, {3}, QuotaPolicy::Tight, std::nullopt, Kind::Goods), PreconditionError);
  CHECK_THROWS_AS(random_instance(0, 2, {}, QuotaPolicy::Tight, std::nullopt, Kind::Goods), PreconditionError);
  CHECK_THROWS_AS(random_instance(0, 2, {-1}, QuotaPolicy::Tight, std::nullopt, Kind::Goods), PreconditionError);
  CHECK_THROWS_AS(random_instance(0, 2, {3}, QuotaPolicy::Tight, std::make_pair(4, 1), Kind::Goods),
                  PreconditionError);
  CHECK_THROWS_AS(random_instance(0, 2, {3}, QuotaPolicy::Tight, std::make_pair(-1, 1), Kind::Goods),
                  PreconditionError);
  CHECK_THROWS_AS(random_instance(0, 2, {3}, QuotaPolicy::Tight, std::make_pair(-1, 1), Kind::Chores),
                  PreconditionError);
}
