#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "causalip/pkg.hpp"

namespace causalip {

enum class MeekRule : std::uint8_t { kR1 = 1, kR2, kR3, kR4 };

std::string_view to_string(MeekRule rule);

struct MeekStep {
  DirectedEdge edge;
  MeekRule rule;
};

struct MeekResult {
  Pkg pkg;
  std::vector<MeekStep> steps;  // in application order
};

// Applies Meek's rules R1-R4 to a fixpoint. Only Adjacent pairs are ever
// oriented. Premises naming an edge match Known (directed) or Adjacent
// (undirected) pairs; premises naming a non-adjacency match Absent pairs only,
// so Unknown and SemiDirected pairs never enable a rule.
//
// shuffle_seed randomizes the order in which candidate pairs and directions
// are examined; the closure itself does not depend on it.
//
// Throws InconsistentPkgError if the Known edges are cyclic on input or an
// orientation would close a directed cycle.
MeekResult meek_propagate(const Pkg& pkg,
                          std::optional<std::uint64_t> shuffle_seed = {});

inline Pkg meek_closure(const Pkg& pkg) { return meek_propagate(pkg).pkg; }

}  // namespace causalip
