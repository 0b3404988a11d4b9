#include "causalip/serialization.hpp"

#include <set>

#include "causalip/errors.hpp"

namespace causalip {

using nlohmann::json;

namespace {

json pair_list(const std::vector<DirectedEdge>& edges) {
  json out = json::array();
  for (const auto& e : edges) out.push_back({e.from, e.to});
  return out;
}

json pair_list(const std::vector<UnorderedPair>& pairs) {
  json out = json::array();
  for (const auto& p : pairs) out.push_back({p.lo, p.hi});
  return out;
}

}  // namespace

json pkg_to_json(const Pkg& pkg) {
  return {
      {"n", pkg.size()},
      {"known", pair_list(pkg.known_edges())},
      {"adjacent", pair_list(pkg.adjacent_pairs())},
      {"semidirected", pair_list(pkg.semidirected_edges())},
      {"unknown", pair_list(pkg.unknown_pairs())},
  };
}

Pkg pkg_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("PKG document must be an object");
  if (!doc.contains("n") || !doc["n"].is_number_unsigned()) {
    throw ValidationError("PKG document needs a non-negative integer \"n\"");
  }
  const auto n = doc["n"].get<std::size_t>();
  Pkg pkg(n);
  std::set<UnorderedPair> seen;

  auto read = [&](const char* field, auto&& set_pair) {
    if (!doc.contains(field)) return;
    const json& list = doc[field];
    if (!list.is_array()) {
      throw ValidationError(std::string("\"") + field + "\" must be an array");
    }
    for (const auto& item : list) {
      if (!item.is_array() || item.size() != 2 || !item[0].is_number_unsigned() ||
          !item[1].is_number_unsigned()) {
        throw ValidationError(std::string("\"") + field +
                              "\" entries must be [i, j] index pairs");
      }
      auto a = item[0].get<std::size_t>();
      auto b = item[1].get<std::size_t>();
      if (a >= n || b >= n || a == b) {
        throw ValidationError(std::string("invalid pair in \"") + field +
                              "\": " + item.dump());
      }
      UnorderedPair p(static_cast<VertexId>(a), static_cast<VertexId>(b));
      if (!seen.insert(p).second) {
        throw ValidationError("pair " + item.dump() + " classified twice");
      }
      set_pair(static_cast<VertexId>(a), static_cast<VertexId>(b));
    }
  };
  read("known", [&](VertexId a, VertexId b) { pkg.set_known(a, b); });
  read("adjacent", [&](VertexId a, VertexId b) { pkg.set_adjacent(a, b); });
  read("semidirected", [&](VertexId a, VertexId b) { pkg.set_semidirected(a, b); });
  read("unknown", [&](VertexId a, VertexId b) { pkg.set_unknown(a, b); });

  try {
    check_known_acyclic(pkg);
  } catch (const InconsistentPkgError& e) {
    throw ValidationError(e.what());
  }
  return pkg;
}

json test_to_json(const Test& test) {
  return {
      {"id", test.id()},
      {"kind", test.kind == TestKind::kOrientation ? "orientation" : "adjacency"},
      {"pair", {test.from, test.to}},
  };
}

json outcome_to_json(const TestOutcome& outcome) {
  return {
      {"test", outcome.test.id()},
      {"result", outcome.result == Result::kPresent ? "present" : "absent"},
  };
}

TestOutcome outcome_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("test") || !doc["test"].is_string() ||
      !doc.contains("result") || !doc["result"].is_string()) {
    throw ValidationError(
        "outcome must look like {\"test\": \"O_1_0\", \"result\": \"present\"}");
  }
  auto test = Test::parse_id(doc["test"].get<std::string>());
  if (!test) throw ValidationError("malformed test id " + doc["test"].dump());
  const auto result = doc["result"].get<std::string>();
  if (result != "present" && result != "absent") {
    throw ValidationError("result must be \"present\" or \"absent\"");
  }
  return {*test, result == "present" ? Result::kPresent : Result::kAbsent};
}

}  // namespace causalip
