#include "charlab/structure_io.hpp"

#include "charlab/error.hpp"
#include "charlab/report.hpp"

#include <fstream>
#include <sstream>

namespace charlab {

using nlohmann::json;

json structure_to_json(const FiniteStructure& s) {
  json j;
  j["n"] = s.universe_size;
  j["relations"] = json::object();
  for (const auto& [name, g] : s.relations) {
    json pairs = json::array();
    for (auto [u, v] : g.edges()) pairs.push_back({u, v});
    j["relations"][name] = std::move(pairs);
  }
  j["unary"] = json::object();
  for (const auto& [name, p] : s.unary) j["unary"][name] = p.members();
  j["equivalences"] = json::object();
  for (const auto& [name, e] : s.equivalences) j["equivalences"][name] = e.classes();
  j["constants"] = s.constants;
  j["parts"] = s.parts;
  if (s.seed) j["seed"] = *s.seed;
  return j;
}

namespace {

std::size_t element(const json& v, std::size_t n, const std::string& where) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw FormatError(where + ": expected a non-negative integer element");
  auto e = v.get<std::size_t>();
  if (e >= n) throw FormatError(where + ": element " + std::to_string(e) + " outside universe of size " + std::to_string(n));
  return e;
}

const json& object_field(const json& j, const char* key) {
  static const json empty = json::object();
  if (!j.contains(key)) return empty;
  if (!j[key].is_object()) throw FormatError(std::string("field '") + key + "' must be an object");
  return j[key];
}

}  // namespace

FiniteStructure structure_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n")) throw FormatError("structure file needs an object with field 'n'");
  if (!j["n"].is_number_integer() || j["n"].get<std::int64_t>() < 0)
    throw FormatError("field 'n' must be a non-negative integer");
  FiniteStructure s;
  s.universe_size = j["n"].get<std::size_t>();
  const std::size_t n = s.universe_size;
  for (const auto& [name, pairs] : object_field(j, "relations").items()) {
    BitGraph g(n);
    if (!pairs.is_array()) throw FormatError("relation " + name + " must be a list of pairs");
    for (const auto& pr : pairs) {
      if (!pr.is_array() || pr.size() != 2) throw FormatError("relation " + name + ": entries must be [i,j] pairs");
      auto u = element(pr[0], n, "relation " + name), v = element(pr[1], n, "relation " + name);
      if (u == v) throw FormatError("relation " + name + ": loop at " + std::to_string(u) + " (relations are loop-free)");
      g.add_edge(u, v);
    }
    s.relations.emplace(name, std::move(g));
  }
  for (const auto& [name, members] : object_field(j, "unary").items()) {
    Bitset p(n);
    if (!members.is_array()) throw FormatError("predicate " + name + " must be a list");
    for (const auto& m : members) p.set(element(m, n, "predicate " + name));
    s.unary.emplace(name, std::move(p));
  }
  for (const auto& [name, classes] : object_field(j, "equivalences").items()) {
    std::vector<std::vector<std::size_t>> cls;
    if (!classes.is_array()) throw FormatError("equivalence " + name + " must be a list of classes");
    for (const auto& c : classes) {
      if (!c.is_array()) throw FormatError("equivalence " + name + ": classes must be lists");
      std::vector<std::size_t> members;
      for (const auto& m : c) members.push_back(element(m, n, "equivalence " + name));
      cls.push_back(std::move(members));
    }
    try {
      s.equivalences.emplace(name, Equivalence::from_classes(n, std::move(cls)));
    } catch (const FormatError& e) {
      throw FormatError("equivalence " + name + ": " + e.what());
    }
  }
  for (const auto& [name, v] : object_field(j, "constants").items()) s.constants[name] = element(v, n, "constant " + name);
  for (const auto& [label, members] : object_field(j, "parts").items()) {
    if (!members.is_array()) throw FormatError("part " + label + " must be a list");
    std::vector<std::size_t> list;
    for (const auto& m : members) list.push_back(element(m, n, "part " + label));
    s.parts[label] = std::move(list);
  }
  if (j.contains("seed") && !j["seed"].is_null()) {
    if (!j["seed"].is_number_integer()) throw FormatError("field 'seed' must be an integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  s.validate();
  return s;
}

FiniteStructure load_structure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open structure file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw FormatError("structure file " + path + ": " + e.what());
  }
  return structure_from_json(j);
}

void save_structure(const FiniteStructure& s, const std::string& path) {
  write_file_atomic(path, structure_to_json(s).dump(1) + "\n");
}

}  // namespace charlab
