#include "mms/json_io.hpp"

#include <fstream>
#include <sstream>

#include "mms/errors.hpp"

namespace mms {

using nlohmann::json;

Rational rational_from_json(const json& j) {
  try {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
  } catch (const std::exception& e) {
    throw InvalidInstance(std::string("bad rational: ") + e.what());
  }
  throw InvalidInstance("bad rational: expected \"p/q\" string or integer, got " + j.dump());
}

json rational_to_json(const Rational& r) { return r.to_string(); }

json rational_report(const Rational& r) { return json{{"value", r.to_string()}, {"decimal", r.to_double()}}; }

namespace {

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInstance(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidInstance(std::string("bad field '") + key + "': " + e.what());
  }
}

}  // namespace

Instance instance_from_json(const json& j) {
  Instance inst;
  inst.n_agents = field<int>(j, "agents");
  inst.kind = j.contains("kind") ? parse_kind(field<std::string>(j, "kind")) : Kind::Goods;
  const json cats = field<json>(j, "categories");
  if (!cats.is_array()) throw InvalidInstance("'categories' must be an array");
  for (std::size_t c = 0; c < cats.size(); ++c) {
    Category cat;
    cat.name = cats[c].contains("name") ? field<std::string>(cats[c], "name") : "C" + std::to_string(c);
    cat.items = field<std::vector<int>>(cats[c], "items");
    cat.q_minus = field<int>(cats[c], "q_minus");
    cat.q_plus = field<int>(cats[c], "q_plus");
    inst.categories.push_back(std::move(cat));
  }
  const json vals = field<json>(j, "valuations");
  if (!vals.is_array()) throw InvalidInstance("'valuations' must be an array");
  for (const auto& row : vals) {
    if (!row.is_array()) throw InvalidInstance("each valuation row must be an array");
    std::vector<Rational> r;
    for (const auto& x : row) r.push_back(rational_from_json(x));
    inst.valuations.push_back(std::move(r));
  }
  return inst;
}

json instance_to_json(const Instance& inst) {
  json cats = json::array();
  for (const auto& c : inst.categories) {
    cats.push_back(json{{"name", c.name}, {"items", c.items}, {"q_minus", c.q_minus}, {"q_plus", c.q_plus}});
  }
  json vals = json::array();
  for (const auto& row : inst.valuations) {
    json r = json::array();
    for (const auto& x : row) r.push_back(rational_to_json(x));
    vals.push_back(std::move(r));
  }
  return json{{"agents", inst.n_agents}, {"kind", to_string(inst.kind)}, {"categories", cats}, {"valuations", vals}};
}

Allocation allocation_from_json(const json& j) {
  Allocation a;
  a.bundles = field<std::vector<std::vector<int>>>(j, "bundles");
  return a;
}

json allocation_to_json(const Allocation& alloc) { return json{{"bundles", alloc.bundles}}; }

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw InvalidInstance("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace mms
