#include "mms/inapprox.hpp"

#include <gmpxx.h>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "mms/errors.hpp"
#include "mms/exact_oracles.hpp"

namespace mms {

int Dimension::num_items() const {
  int m = 0;
  for (const auto& c : categories) m += c.size;
  return m;
}

void validate_dimension(const Dimension& dim) {
  if (dim.n_agents < 1) throw InvalidInstance("dimension needs at least one agent");
  for (std::size_t c = 0; c < dim.categories.size(); ++c) {
    const auto& cat = dim.categories[c];
    const std::string where = "category " + std::to_string(c) + ": ";
    if (cat.size < 0) throw InvalidInstance(where + "negative size");
    if (cat.q_minus < 0 || cat.q_minus > cat.q_plus) throw InvalidInstance(where + "need 0 <= q- <= q+");
    if (static_cast<long>(cat.q_minus) * dim.n_agents > cat.size ||
        cat.size > static_cast<long>(cat.q_plus) * dim.n_agents) {
      throw InvalidInstance(where + "quotas cannot be met by n bundles");
    }
  }
}

Dimension dimension_of(const Instance& inst) {
  Dimension dim;
  dim.n_agents = inst.n_agents;
  int next = 0;
  for (const auto& c : inst.categories) {
    for (int g : c.items) {
      if (g != next++) throw PreconditionError("category items are not numbered consecutively");
    }
    dim.categories.push_back({static_cast<int>(c.items.size()), c.q_minus, c.q_plus});
  }
  return dim;
}

Instance instance_of(const Dimension& dim, const std::vector<std::vector<Rational>>& valuations) {
  validate_dimension(dim);
  Instance inst;
  inst.n_agents = dim.n_agents;
  int next = 0;
  for (std::size_t c = 0; c < dim.categories.size(); ++c) {
    Category cat;
    cat.name = "C" + std::to_string(c);
    for (int j = 0; j < dim.categories[c].size; ++j) cat.items.push_back(next++);
    cat.q_minus = dim.categories[c].q_minus;
    cat.q_plus = dim.categories[c].q_plus;
    inst.categories.push_back(std::move(cat));
  }
  inst.valuations = valuations;
  if (all_nonnegative(inst)) {
    inst.kind = Kind::Goods;
  } else if (all_nonpositive(inst)) {
    inst.kind = Kind::Chores;
  } else {
    inst.kind = Kind::Mixed;
  }
  require_valid(inst);
  return inst;
}

std::size_t count_feasible_bundles(const Dimension& dim) {
  validate_dimension(dim);
  mpz_class total = 1;
  for (const auto& c : dim.categories) {
    mpz_class sum = 0;
    for (int k = c.q_minus; k <= std::min(c.q_plus, c.size); ++k) {
      mpz_class b;
      mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(c.size), static_cast<unsigned long>(k));
      sum += b;
    }
    total *= sum;
  }
  if (total > mpz_class(std::to_string(std::numeric_limits<std::size_t>::max()))) {
    return std::numeric_limits<std::size_t>::max();
  }
  return std::stoull(total.get_str());
}

std::vector<Bundle> enumerate_feasible_bundles(const Dimension& dim, std::size_t guard) {
  const std::size_t count = count_feasible_bundles(dim);
  if (count > guard) {
    throw GuardExceeded(std::to_string(count) + " feasible bundles exceed the guard of " + std::to_string(guard));
  }
  std::vector<Bundle> out{Bundle{}};
  int offset = 0;
  for (const auto& c : dim.categories) {
    std::vector<Bundle> parts;
    Bundle cur;
    std::function<void(int)> choose = [&](int j) {
      const int have = static_cast<int>(cur.size());
      if (have >= c.q_minus && have <= c.q_plus) parts.push_back(cur);
      if (have == c.q_plus) return;
      for (int g = j; g < c.size; ++g) {
        cur.push_back(offset + g);
        choose(g + 1);
        cur.pop_back();
      }
    };
    choose(0);
    std::vector<Bundle> next;
    for (const auto& head : out) {
      for (const auto& part : parts) {
        Bundle b = head;
        b.insert(b.end(), part.begin(), part.end());
        next.push_back(std::move(b));
      }
    }
    out = std::move(next);
    offset += c.size;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<int>> enumerate_feasible_allocations(const Dimension& dim, const std::vector<Bundle>& bundles,
                                                             std::size_t guard) {
  validate_dimension(dim);
  const int n = dim.n_agents;
  const int m = dim.num_items();
  const int k = static_cast<int>(dim.categories.size());
  std::vector<int> cat;
  for (int c = 0; c < k; ++c) cat.insert(cat.end(), dim.categories[c].size, c);
  std::vector<int> remaining(k), deficit(k);
  for (int c = 0; c < k; ++c) {
    remaining[c] = dim.categories[c].size;
    deficit[c] = dim.categories[c].q_minus * n;
  }
  std::vector<std::vector<int>> count(n, std::vector<int>(k, 0));
  std::vector<Bundle> held(n);
  std::vector<std::vector<int>> out;

  std::function<void(int)> rec = [&](int g) {
    if (g == m) {
      if (out.size() >= guard) {
        throw GuardExceeded("feasible allocations exceed the guard of " + std::to_string(guard));
      }
      std::vector<int> idx(n);
      for (int i = 0; i < n; ++i) {
        auto it = std::lower_bound(bundles.begin(), bundles.end(), held[i]);
        if (it == bundles.end() || *it != held[i]) throw InternalInvariantError("bundle missing from the bundle list");
        idx[i] = static_cast<int>(it - bundles.begin());
      }
      out.push_back(std::move(idx));
      return;
    }
    const int c = cat[g];
    const auto& cd = dim.categories[c];
    for (int i = 0; i < n; ++i) {
      if (count[i][c] >= cd.q_plus) continue;
      const bool short_before = count[i][c] < cd.q_minus;
      ++count[i][c];
      --remaining[c];
      if (short_before) --deficit[c];
      if (deficit[c] <= remaining[c]) {
        held[i].push_back(g);
        rec(g + 1);
        held[i].pop_back();
      }
      if (short_before) ++deficit[c];
      ++remaining[c];
      --count[i][c];
    }
  };
  rec(0);
  return out;
}

int MblpModel::u(int agent, int item) const { return 1 + agent * dim.num_items() + item; }

int MblpModel::p(int agent, int k, int s) const {
  const int n = dim.n_agents;
  const int S = static_cast<int>(bundles.size());
  return 1 + n * dim.num_items() + (agent * n + k) * S + s;
}

int MblpModel::l(int agent, int s) const {
  const int n = dim.n_agents;
  const int S = static_cast<int>(bundles.size());
  return 1 + n * dim.num_items() + n * n * S + agent * S + s;
}

std::size_t MblpModel::num_binaries() const {
  return static_cast<std::size_t>(
      std::count_if(variables.begin(), variables.end(), [](const Variable& v) { return v.type == VarType::Binary; }));
}

MblpModel build_mblp(const Dimension& dim, std::size_t bundle_guard, std::size_t allocation_guard) {
  MblpModel model;
  model.dim = dim;
  model.bundles = enumerate_feasible_bundles(dim, bundle_guard);
  model.allocations = enumerate_feasible_allocations(dim, model.bundles, allocation_guard);
  const int n = dim.n_agents;
  const int m = dim.num_items();
  const int S = static_cast<int>(model.bundles.size());
  auto name = [](std::string prefix, std::initializer_list<int> idx) {
    for (int x : idx) prefix += "_" + std::to_string(x);
    return prefix;
  };

  model.variables.push_back({"alpha", VarType::Continuous, 0, std::nullopt});
  for (int i = 0; i < n; ++i) {
    for (int g = 0; g < m; ++g) model.variables.push_back({name("u", {i, g}), VarType::Continuous, 0, 1});
  }
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      for (int s = 0; s < S; ++s) model.variables.push_back({name("p", {i, k, s}), VarType::Binary, 0, 1});
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < S; ++s) model.variables.push_back({name("l", {i, s}), VarType::Binary, 0, 1});
  }

  auto& rows = model.rows;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      Row r{name("pc", {i, k}), {}, Sense::Equal, 1};
      for (int s = 0; s < S; ++s) r.terms.push_back({1, model.p(i, k, s)});
      rows.push_back(std::move(r));
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int g = 0; g < m; ++g) {
      Row r{name("dj", {i, g}), {}, Sense::Equal, 1};
      for (int k = 0; k < n; ++k) {
        for (int s = 0; s < S; ++s) {
          const auto& b = model.bundles[s];
          if (std::binary_search(b.begin(), b.end(), g)) r.terms.push_back({1, model.p(i, k, s)});
        }
      }
      rows.push_back(std::move(r));
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      for (int s = 0; s < S; ++s) {
        Row r{name("ge", {i, k, s}), {}, Sense::GreaterEq, 0};
        for (int g : model.bundles[s]) r.terms.push_back({1, model.u(i, g)});
        r.terms.push_back({-1, model.p(i, k, s)});
        rows.push_back(std::move(r));
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < S; ++s) {
      const long size = static_cast<long>(model.bundles[s].size());
      Row r{name("le", {i, s}), {}, Sense::LessEq, size};
      for (int g : model.bundles[s]) r.terms.push_back({1, model.u(i, g)});
      r.terms.push_back({-1, model.alpha()});
      if (size != 0) r.terms.push_back({size, model.l(i, s)});
      rows.push_back(std::move(r));
    }
  }
  for (std::size_t a = 0; a < model.allocations.size(); ++a) {
    Row r{name("fa", {static_cast<int>(a)}), {}, Sense::GreaterEq, 1};
    for (int i = 0; i < n; ++i) r.terms.push_back({1, model.l(i, model.allocations[a][i])});
    rows.push_back(std::move(r));
  }
  return model;
}

namespace {

constexpr std::size_t kLineWidth = 78;

const char* sense_text(Sense s) {
  switch (s) {
    case Sense::LessEq: return "<=";
    case Sense::GreaterEq: return ">=";
    case Sense::Equal: return "=";
  }
  return "=";
}

std::string term_text(const Term& t, const std::string& var, bool first) {
  std::string out;
  const long mag = t.coef < 0 ? -t.coef : t.coef;
  if (t.coef < 0) {
    out = "- ";
  } else if (!first) {
    out = "+ ";
  }
  if (mag != 1) out += std::to_string(mag) + " ";
  return out + var;
}

/// Joins tokens with single spaces, breaking lines before a token that would
/// pass the width limit.
void write_wrapped(std::ostream& out, const std::vector<std::string>& tokens) {
  std::string line;
  for (const auto& tok : tokens) {
    if (!line.empty() && line.size() + 1 + tok.size() > kLineWidth) {
      out << line << "\n";
      line = "  ";
    }
    if (line.empty()) {
      line = " " + tok;
    } else {
      line += (line == "  " ? "" : " ") + tok;
    }
  }
  if (!line.empty()) out << line << "\n";
}

}  // namespace

void write_lp(const MblpModel& model, std::ostream& out) {
  out << "Minimize\n obj: alpha\nSubject To\n";
  for (const auto& row : model.rows) {
    std::vector<std::string> tokens{row.name + ":"};
    if (row.terms.empty()) tokens.push_back("0 alpha");
    for (std::size_t t = 0; t < row.terms.size(); ++t) {
      tokens.push_back(term_text(row.terms[t], model.variables[row.terms[t].var].name, t == 0));
    }
    tokens.push_back(std::string(sense_text(row.sense)) + " " + std::to_string(row.rhs));
    write_wrapped(out, tokens);
  }
  out << "Bounds\n";
  for (const auto& v : model.variables) {
    if (v.type != VarType::Continuous) continue;
    if (v.upper) {
      out << " " << v.lower << " <= " << v.name << " <= " << *v.upper << "\n";
    } else {
      out << " " << v.name << " >= " << v.lower << "\n";
    }
  }
  out << "Binaries\n";
  std::vector<std::string> names;
  for (const auto& v : model.variables) {
    if (v.type == VarType::Binary) names.push_back(v.name);
  }
  write_wrapped(out, names);
  out << "End\n";
}

std::string lp_text(const MblpModel& model) {
  std::ostringstream os;
  write_lp(model, os);
  return os.str();
}

void emit_lp(const MblpModel& model, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  write_lp(model, f);
  if (!f) throw Error("cannot write " + path);
}

std::string mapping_json(const MblpModel& model) {
  nlohmann::json j;
  j["agents"] = model.dim.n_agents;
  j["items"] = model.dim.num_items();
  j["categories"] = nlohmann::json::array();
  for (const auto& c : model.dim.categories) {
    j["categories"].push_back({{"size", c.size}, {"q_minus", c.q_minus}, {"q_plus", c.q_plus}});
  }
  j["variables"] = {{"alpha", "alpha"},
                    {"u", "u_<agent>_<item>"},
                    {"p", "p_<agent>_<part>_<bundle>"},
                    {"l", "l_<agent>_<bundle>"}};
  j["bundles"] = nlohmann::json::array();
  for (std::size_t s = 0; s < model.bundles.size(); ++s) {
    j["bundles"].push_back({{"index", s}, {"items", model.bundles[s]}});
  }
  j["num_allocations"] = model.allocations.size();
  j["num_variables"] = model.variables.size();
  j["num_rows"] = model.rows.size();
  return j.dump(2) + "\n";
}

namespace {

bool is_integer_token(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + static_cast<long>(i), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool is_sense(const std::string& s) { return s == "<=" || s == ">=" || s == "="; }

Sense parse_sense(const std::string& s) {
  if (s == "<=") return Sense::LessEq;
  if (s == ">=") return Sense::GreaterEq;
  return Sense::Equal;
}

/// Parses "[sign] [coef] name ..." starting at tokens[pos], stopping at a
/// sense token or the end.
std::vector<ParsedTerm> parse_terms(const std::vector<std::string>& tokens, std::size_t& pos) {
  std::vector<ParsedTerm> terms;
  while (pos < tokens.size() && !is_sense(tokens[pos]) && tokens[pos].back() != ':') {
    long sign = 1;
    if (tokens[pos] == "+" || tokens[pos] == "-") {
      sign = tokens[pos] == "-" ? -1 : 1;
      ++pos;
    }
    long coef = 1;
    if (pos < tokens.size() && is_integer_token(tokens[pos])) coef = std::stol(tokens[pos++]);
    if (pos >= tokens.size() || is_sense(tokens[pos])) throw Error("LP term without a variable");
    terms.push_back({sign * coef, tokens[pos++]});
  }
  return terms;
}

std::vector<std::string> split(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

}  // namespace

ParsedLp parse_lp(const std::string& text) {
  enum class Section { None, Objective, Constraints, Bounds, Binaries, End };
  Section section = Section::None;
  std::vector<std::string> objective_tokens, row_tokens;
  ParsedLp lp;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line == "Minimize") {
      section = Section::Objective;
      continue;
    }
    if (line == "Subject To") {
      section = Section::Constraints;
      continue;
    }
    if (line == "Bounds") {
      section = Section::Bounds;
      continue;
    }
    if (line == "Binaries") {
      section = Section::Binaries;
      continue;
    }
    if (line == "End") {
      section = Section::End;
      continue;
    }
    const auto tokens = split(line);
    if (tokens.empty()) continue;
    switch (section) {
      case Section::Objective:
        objective_tokens.insert(objective_tokens.end(), tokens.begin(), tokens.end());
        break;
      case Section::Constraints:
        row_tokens.insert(row_tokens.end(), tokens.begin(), tokens.end());
        break;
      case Section::Bounds:
        if (tokens.size() == 3 && tokens[1] == ">=" && is_integer_token(tokens[2])) {
          lp.bounds[tokens[0]] = {std::stol(tokens[2]), std::nullopt};
        } else if (tokens.size() == 5 && tokens[1] == "<=" && tokens[3] == "<=" && is_integer_token(tokens[0]) &&
                   is_integer_token(tokens[4])) {
          lp.bounds[tokens[2]] = {std::stol(tokens[0]), std::stol(tokens[4])};
        } else {
          throw Error("unsupported bound line: " + line);
        }
        break;
      case Section::Binaries:
        lp.binaries.insert(lp.binaries.end(), tokens.begin(), tokens.end());
        break;
      default:
        throw Error("text outside any LP section: " + line);
    }
  }
  if (section != Section::End) throw Error("LP text does not end with End");

  std::size_t pos = 0;
  if (objective_tokens.empty() || objective_tokens[0] != "obj:") throw Error("objective must be labelled obj:");
  pos = 1;
  lp.objective = parse_terms(objective_tokens, pos);

  pos = 0;
  while (pos < row_tokens.size()) {
    const std::string& label = row_tokens[pos];
    if (label.size() < 2 || label.back() != ':') throw Error("constraint without a name near " + label);
    ParsedRow row;
    row.name = label.substr(0, label.size() - 1);
    ++pos;
    row.terms = parse_terms(row_tokens, pos);
    if (pos + 1 >= row_tokens.size() || !is_sense(row_tokens[pos]) || !is_integer_token(row_tokens[pos + 1])) {
      throw Error("constraint " + row.name + " lacks a sense and right-hand side");
    }
    row.sense = parse_sense(row_tokens[pos]);
    row.rhs = std::stol(row_tokens[pos + 1]);
    pos += 2;
    lp.rows.push_back(std::move(row));
  }
  return lp;
}

Assignment mblp_witness(const MblpModel& model, const Instance& inst, const Rational& alpha) {
  require_valid(inst);
  if (inst.kind != Kind::Goods) throw PreconditionError("witness needs a goods instance");
  const Dimension dim = dimension_of(inst);
  bool same = dim.n_agents == model.dim.n_agents && dim.categories.size() == model.dim.categories.size();
  for (std::size_t c = 0; same && c < dim.categories.size(); ++c) {
    const auto& x = dim.categories[c];
    const auto& y = model.dim.categories[c];
    same = x.size == y.size && x.q_minus == y.q_minus && x.q_plus == y.q_plus;
  }
  if (!same) throw PreconditionError("instance does not match the model dimension");

  const int n = dim.n_agents;
  const int m = dim.num_items();
  const int S = static_cast<int>(model.bundles.size());
  Assignment x(model.variables.size());
  x[model.alpha()] = alpha;
  for (int i = 0; i < n; ++i) {
    const MmsResult mms = mms_bruteforce(inst, i);
    if (mms.value.sign() <= 0) throw PreconditionError("witness needs positive MMS values");
    for (int g = 0; g < m; ++g) {
      const Rational u = inst.value(i, g) / mms.value;
      if (u > Rational(1)) throw PreconditionError("witness needs every item worth at most the MMS");
      x[model.u(i, g)] = u;
    }
    for (int k = 0; k < n; ++k) {
      const Bundle part = sorted(mms.partition.bundles[k]);
      auto it = std::lower_bound(model.bundles.begin(), model.bundles.end(), part);
      if (it == model.bundles.end() || *it != part) throw InternalInvariantError("MMS bundle is not feasible");
      x[model.p(i, k, static_cast<int>(it - model.bundles.begin()))] = Rational(1);
    }
    for (int s = 0; s < S; ++s) {
      Rational sum;
      for (int g : model.bundles[s]) sum += x[model.u(i, g)];
      if (sum < alpha) x[model.l(i, s)] = Rational(1);
    }
  }
  return x;
}

std::vector<std::string> violated_rows(const MblpModel& model, const Assignment& values) {
  if (values.size() != model.variables.size()) throw PreconditionError("assignment has the wrong length");
  std::vector<std::string> bad;
  for (std::size_t v = 0; v < model.variables.size(); ++v) {
    const auto& var = model.variables[v];
    const Rational& x = values[v];
    if (var.type == VarType::Binary) {
      if (!(x.is_zero() || x == Rational(1))) bad.push_back(var.name);
    } else if (x < Rational(var.lower) || (var.upper && x > Rational(*var.upper))) {
      bad.push_back(var.name);
    }
  }
  for (const auto& row : model.rows) {
    Rational lhs;
    for (const auto& t : row.terms) lhs += Rational(t.coef) * values[t.var];
    const Rational rhs(row.rhs);
    const bool ok = row.sense == Sense::LessEq ? lhs <= rhs : row.sense == Sense::GreaterEq ? lhs >= rhs : lhs == rhs;
    if (!ok) bad.push_back(row.name);
  }
  return bad;
}

bool check_alpha_witness(const Dimension& dim, const std::vector<std::vector<Rational>>& valuations,
                         const Rational& alpha) {
  const Instance inst = instance_of(dim, valuations);
  if (inst.kind != Kind::Goods) throw PreconditionError("witness check needs a goods instance");
  const BestAlphaResult best = best_alpha(inst);
  return best.alpha.has_value() && *best.alpha <= alpha;
}

}  // namespace mms
