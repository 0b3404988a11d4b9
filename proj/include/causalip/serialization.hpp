#pragma once

#include "json.hpp"

#include "causalip/pkg.hpp"
#include "causalip/transitions.hpp"

namespace causalip {

// PKG document:
//   {"n": 3, "known": [[0,1]], "adjacent": [[1,2]], "semidirected": [],
//    "unknown": []}
// known/semidirected pairs are directed [from, to]; adjacent/unknown pairs
// are written with i < j. Pairs listed nowhere are Absent.
nlohmann::json pkg_to_json(const Pkg& pkg);

// Throws ValidationError on malformed documents, out-of-range or repeated
// pairs, and cyclic known edges.
Pkg pkg_from_json(const nlohmann::json& doc);

nlohmann::json test_to_json(const Test& test);
nlohmann::json outcome_to_json(const TestOutcome& outcome);

// Accepts {"test": "O_1_0", "result": "present"}.
TestOutcome outcome_from_json(const nlohmann::json& doc);

}  // namespace causalip
