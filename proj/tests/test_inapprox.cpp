#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "mms/errors.hpp"
#include "mms/exact_oracles.hpp"
#include "mms/generators.hpp"
#include "mms/inapprox.hpp"
#include "support/naive.hpp"

using namespace mms;

namespace {

Dimension dim(int n, std::vector<CategoryDim> cats) {
  Dimension d;
  d.n_agents = n;
  d.categories = std::move(cats);
  return d;
}

long binom(int a, int b) {
  if (b < 0 || b > a) return 0;
  long r = 1;
  for (int k = 1; k <= b; ++k) r = r * (a - b + k) / k;
  return r;
}

/// Feasible bundles by filtering every subset of the items.
std::vector<Bundle> power_set_bundles(const Dimension& d) {
  const int m = d.num_items();
  std::vector<Bundle> out;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    Bundle b;
    for (int g = 0; g < m; ++g) {
      if (mask >> g & 1u) b.push_back(g);
    }
    bool ok = true;
    int start = 0;
    for (const auto& c : d.categories) {
      const auto count = std::count_if(b.begin(), b.end(), [&](int g) { return g >= start && g < start + c.size; });
      ok = ok && count >= c.q_minus && count <= c.q_plus;
      start += c.size;
    }
    if (ok) out.push_back(b);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<Rational>> zeros(const Dimension& d) {
  return std::vector<std::vector<Rational>>(d.n_agents, std::vector<Rational>(d.num_items()));
}

Dimension random_dim(std::mt19937_64& rng, int max_items) {
  const int n = 1 + static_cast<int>(rng() % 3);
  const int cats = 1 + static_cast<int>(rng() % 2);
  Dimension d;
  d.n_agents = n;
  int left = max_items;
  for (int c = 0; c < cats && left > 0; ++c) {
    const int size = 1 + static_cast<int>(rng() % left);
    left -= size;
    const int lo = size / n;
    const int hi = (size + n - 1) / n;
    const int qm = static_cast<int>(rng() % (lo + 1));
    const int qp = hi + static_cast<int>(rng() % (size - hi + 1));
    d.categories.push_back({size, qm, qp});
  }
  return d;
}

}  // namespace

TEST_CASE("feasible bundle enumeration examples") {
  CHECK(enumerate_feasible_bundles(dim(2, {{4, 2, 2}})).size() == 6);
  CHECK(enumerate_feasible_bundles(dim(2, {{2, 1, 1}, {2, 1, 1}})).size() == 4);
  CHECK(enumerate_feasible_bundles(dim(1, {{3, 0, 3}})).size() == 8);
  const auto b = enumerate_feasible_bundles(dim(2, {{2, 1, 1}, {2, 1, 1}}));
  CHECK(b == std::vector<Bundle>{{0, 2}, {0, 3}, {1, 2}, {1, 3}});
  CHECK_THROWS_AS(enumerate_feasible_bundles(dim(2, {{20, 0, 20}})), GuardExceeded);
  CHECK_THROWS_AS(enumerate_feasible_bundles(dim(2, {{4, 2, 2}}), 5), GuardExceeded);
  CHECK_THROWS_AS(enumerate_feasible_bundles(dim(2, {{5, 1, 2}})), InvalidInstance);
}

TEST_CASE("feasible allocation enumeration examples") {
  auto count = [](const Dimension& d) {
    return enumerate_feasible_allocations(d, enumerate_feasible_bundles(d)).size();
  };
  CHECK(count(dim(2, {{2, 1, 1}})) == 2);
  CHECK(count(dim(2, {{4, 2, 2}})) == 6);
  CHECK(count(dim(2, {{3, 1, 2}})) == 6);
  const Dimension d = dim(2, {{4, 0, 4}});
  CHECK_THROWS_AS(enumerate_feasible_allocations(d, enumerate_feasible_bundles(d), 10), GuardExceeded);
}

TEST_CASE("enumerations are complete and duplicate-free against power-set filtering") {
  std::mt19937_64 rng(71);
  for (int rep = 0; rep < 200; ++rep) {
    const Dimension d = random_dim(rng, 6);
    const auto bundles = enumerate_feasible_bundles(d);
    CHECK(bundles == power_set_bundles(d));
    CHECK(bundles.size() == count_feasible_bundles(d));

    const auto allocs = enumerate_feasible_allocations(d, bundles);
    const Instance inst = instance_of(d, zeros(d));
    CHECK(allocs.size() == static_cast<std::size_t>(naive::count_feasible(inst)));
    std::set<std::vector<int>> distinct(allocs.begin(), allocs.end());
    CHECK(distinct.size() == allocs.size());
    for (const auto& a : allocs) {
      std::vector<int> seen(d.num_items(), 0);
      for (int s : a) {
        for (int g : bundles[s]) ++seen[g];
      }
      CHECK(std::all_of(seen.begin(), seen.end(), [](int x) { return x == 1; }));
    }
  }
}

TEST_CASE("count_feasible_bundles closed form") {
  const Dimension d = dim(3, {{7, 1, 4}, {5, 0, 2}});
  long expected = 1;
  for (const auto& c : d.categories) {
    long s = 0;
    for (int k = c.q_minus; k <= c.q_plus; ++k) s += binom(c.size, k);
    expected *= s;
  }
  CHECK(count_feasible_bundles(d) == static_cast<std::size_t>(expected));
}

TEST_CASE("build_mblp counts on the smallest example") {
  const MblpModel model = build_mblp(dim(2, {{2, 1, 1}}));
  CHECK(model.bundles.size() == 2);
  CHECK(model.allocations.size() == 2);
  CHECK(model.variables.size() == 17);
  CHECK(model.rows.size() == 22);
  CHECK(model.num_binaries() == 12);
}

TEST_CASE("build_mblp counts match the closed forms and reference declared variables") {
  std::mt19937_64 rng(72);
  int checked = 0;
  for (int rep = 0; rep < 300; ++rep) {
    const Dimension d = random_dim(rng, 7);
    if (count_feasible_bundles(d) > 64) continue;
    const MblpModel model = build_mblp(d);
    const std::size_t n = d.n_agents, m = d.num_items(), s = model.bundles.size(), f = model.allocations.size();
    CHECK(model.variables.size() == 1 + n * m + n * n * s + n * s);
    CHECK(model.rows.size() == n * n + n * m + n * n * s + n * s + f);
    CHECK(model.num_binaries() == n * n * s + n * s);
    for (const auto& row : model.rows) {
      for (const auto& t : row.terms) {
        CHECK(t.var >= 0);
        CHECK(t.var < static_cast<int>(model.variables.size()));
      }
    }
    std::set<std::string> names;
    for (const auto& v : model.variables) names.insert(v.name);
    CHECK(names.size() == model.variables.size());
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("build_mblp row contents") {
  const MblpModel model = build_mblp(dim(2, {{3, 1, 2}}));
  for (const auto& row : model.rows) {
    if (row.name.rfind("le_", 0) == 0) {
      // sum u - alpha + |S| l <= |S|
      const int s = std::stoi(row.name.substr(row.name.rfind('_') + 1));
      const long size = static_cast<long>(model.bundles[s].size());
      CHECK(row.rhs == size);
      CHECK(row.sense == Sense::LessEq);
      CHECK(row.terms.back().coef == size);
    }
    if (row.name.rfind("fa_", 0) == 0) {
      CHECK(row.sense == Sense::GreaterEq);
      CHECK(row.rhs == 1);
      CHECK(row.terms.size() == 2);
    }
  }
  CHECK(model.variables[model.alpha()].name == "alpha");
  CHECK(model.variables[model.u(1, 2)].name == "u_1_2");
  CHECK(model.variables[model.p(0, 1, 3)].name == "p_0_1_3");
  CHECK(model.variables[model.l(1, 4)].name == "l_1_4");
}

TEST_CASE("LP text round-trips through the parser") {
  const MblpModel model = build_mblp(dim(2, {{3, 1, 2}, {2, 1, 1}}));
  const std::string text = lp_text(model);
  CHECK(text.rfind("Minimize\n obj: alpha\nSubject To\n", 0) == 0);
  CHECK(text.size() >= 4);
  CHECK(text.substr(text.size() - 4) == "End\n");
  const ParsedLp parsed = parse_lp(text);
  REQUIRE(parsed.rows.size() == model.rows.size());
  for (std::size_t r = 0; r < model.rows.size(); ++r) {
    const auto& a = model.rows[r];
    const auto& b = parsed.rows[r];
    CHECK(a.name == b.name);
    CHECK(a.sense == b.sense);
    CHECK(a.rhs == b.rhs);
    REQUIRE(a.terms.size() == b.terms.size());
    for (std::size_t t = 0; t < a.terms.size(); ++t) {
      CHECK(a.terms[t].coef == b.terms[t].coef);
      CHECK(model.variables[a.terms[t].var].name == b.terms[t].var);
    }
  }
  std::set<std::string> expected_bin;
  std::size_t continuous = 0;
  for (const auto& v : model.variables) {
    if (v.type == VarType::Binary) {
      expected_bin.insert(v.name);
      CHECK((v.name[0] == 'p' || v.name[0] == 'l'));
    } else {
      ++continuous;
    }
  }
  CHECK(std::set<std::string>(parsed.binaries.begin(), parsed.binaries.end()) == expected_bin);
  CHECK(parsed.binaries.size() == expected_bin.size());
  CHECK(parsed.bounds.size() == continuous);
  CHECK(parsed.bounds.at("alpha").first == 0);
  CHECK_FALSE(parsed.bounds.at("alpha").second.has_value());
  CHECK(parsed.bounds.at("u_1_4").second == 1);
  REQUIRE(parsed.objective.size() == 1);
  CHECK(parsed.objective[0].var == "alpha");
  for (const auto& line : [&] {
         std::vector<std::string> lines;
         std::istringstream in(text);
         for (std::string l; std::getline(in, l);) lines.push_back(l);
         return lines;
       }()) {
    CHECK(line.size() <= 80);
  }
}

TEST_CASE("parse_lp rejects malformed text") {
  CHECK_THROWS_AS(parse_lp("Minimize\n obj: alpha\nSubject To\n c: x + = 1\nEnd\n"), Error);
  CHECK_THROWS_AS(parse_lp("Minimize\n obj: alpha\n"), Error);
  CHECK_THROWS_AS(parse_lp("garbage\n"), Error);
}

TEST_CASE("emitted LP files are byte-identical across runs") {
  const auto dir = std::filesystem::temp_directory_path() / "mms_lp_test";
  std::filesystem::create_directories(dir);
  const Dimension d = dim(3, {{4, 1, 2}, {2, 0, 1}});
  emit_lp(build_mblp(d), (dir / "a.lp").string());
  emit_lp(build_mblp(d), (dir / "b.lp").string());
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  CHECK(slurp(dir / "a.lp") == slurp(dir / "b.lp"));
  CHECK(slurp(dir / "a.lp") == lp_text(build_mblp(d)));
  CHECK_THROWS_AS(emit_lp(build_mblp(d), (dir / "missing" / "x.lp").string()), Error);
  CHECK(mapping_json(build_mblp(d)) == mapping_json(build_mblp(d)));
  std::filesystem::remove_all(dir);
}

TEST_CASE("witness from the tight goods instance") {
  const Instance i2 = tight_goods_instance(2);
  const MblpModel model = build_mblp(dimension_of(i2));
  CHECK(model.bundles.size() == 20);

  const Assignment ok = mblp_witness(model, i2, Rational(101, 100));
  CHECK(ok[model.alpha()] == Rational(101, 100));
  CHECK(violated_rows(model, ok).empty());

  // The allocation giving both agents their full MMS has no agent below 4/5 + 1/100.
  const Assignment low = mblp_witness(model, i2, Rational(4, 5) + Rational(1, 100));
  const auto bad = violated_rows(model, low);
  CHECK_FALSE(bad.empty());
  for (const auto& name : bad) CHECK(name.rfind("fa_", 0) == 0);

  Assignment broken = ok;
  broken[model.u(0, 0)] = Rational(2);
  const auto out_of_bounds = violated_rows(model, broken);
  CHECK(std::find(out_of_bounds.begin(), out_of_bounds.end(), "u_0_0") != out_of_bounds.end());
  Assignment fractional = ok;
  fractional[model.p(0, 0, 0)] = Rational(1, 2);
  CHECK_FALSE(violated_rows(model, fractional).empty());
  CHECK_THROWS_AS(violated_rows(model, Assignment(3)), PreconditionError);
}

TEST_CASE("witness is feasible just above best_alpha on random goods instances") {
  std::mt19937_64 rng(73);
  int checked = 0;
  for (int rep = 0; rep < 60; ++rep) {
    const Instance inst = naive::random_ordered(rng, 2, {4}, 1, 4, Kind::Goods);
    const auto mu = naive::mms_all(inst);
    bool usable = true;
    for (int i = 0; i < 2; ++i) {
      for (const auto& x : inst.valuations[i]) usable = usable && x <= mu[i];
    }
    if (!usable) continue;
    const MblpModel model = build_mblp(dimension_of(inst));
    const Rational best = *best_alpha(inst).alpha;
    CHECK(violated_rows(model, mblp_witness(model, inst, best + Rational(1, 1000))).empty());
    CHECK_FALSE(violated_rows(model, mblp_witness(model, inst, best)).empty());
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("mblp_witness preconditions") {
  const Instance i2 = tight_goods_instance(2);
  const MblpModel model = build_mblp(dimension_of(i2));
  CHECK_THROWS_AS(mblp_witness(model, tight_chores_instance(3), Rational(1)), PreconditionError);
  Instance zero = i2;
  for (auto& r : zero.valuations) std::fill(r.begin(), r.end(), Rational(0));
  CHECK_THROWS_AS(mblp_witness(model, zero, Rational(1)), PreconditionError);
}

TEST_CASE("check_alpha_witness") {
  const Instance i2 = tight_goods_instance(2);
  const Dimension d = dimension_of(i2);
  CHECK(check_alpha_witness(d, i2.valuations, Rational(1)));
  CHECK_FALSE(check_alpha_witness(d, i2.valuations, Rational(99, 100)));

  const Dimension d2 = dim(3, {{5, 1, 2}});
  const std::vector<Rational> r = naive::row({5, 3, 3, 2, 1});
  CHECK(check_alpha_witness(d2, {r, r, r}, Rational(1)));
  CHECK_FALSE(check_alpha_witness(dim(2, {{2, 0, 2}}), zeros(dim(2, {{2, 0, 2}})), Rational(1)));

  std::mt19937_64 rng(74);
  for (int rep = 0; rep < 40; ++rep) {
    const Instance inst = naive::random_ordered(rng, 2, {5}, 0, 4, Kind::Goods);
    const auto best = best_alpha(inst).alpha;
    if (!best) continue;
    CHECK(check_alpha_witness(dimension_of(inst), inst.valuations, *best));
    CHECK_FALSE(check_alpha_witness(dimension_of(inst), inst.valuations, *best - Rational(1, 1000)));
  }
}

TEST_CASE("dimension helpers") {
  const Instance i2 = tight_goods_instance(2);
  const Dimension d = dimension_of(i2);
  CHECK(d.n_agents == 2);
  REQUIRE(d.categories.size() == 1);
  CHECK(d.categories[0].size == 6);
  CHECK(d.num_items() == 6);
  const Instance back = instance_of(d, i2.valuations);
  CHECK(back.valuations == i2.valuations);
  CHECK(validate_instance(back).ok());
  CHECK_THROWS_AS(validate_dimension(dim(0, {{1, 0, 1}})), InvalidInstance);
  CHECK_THROWS_AS(validate_dimension(dim(2, {{3, 2, 1}})), InvalidInstance);
  CHECK_NOTHROW(validate_dimension(dim(2, {{3, 1, 2}})));
}
