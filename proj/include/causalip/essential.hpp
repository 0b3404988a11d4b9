#pragma once

#include <cstddef>
#include <vector>

#include "causalip/dag.hpp"
#include "causalip/pkg.hpp"

namespace causalip {

// Essential graph (CPDAG) of a DAG as a PKG: v-structure edges and their
// Meek consequences Known, other skeleton edges Adjacent, everything else
// Absent.
Pkg cpdag_of(const Dag& dag);

inline constexpr std::size_t kDefaultMecPairLimit = 24;

// Brute-force Markov equivalence class of a PKG holding only Known, Adjacent
// and Absent pairs: every acyclic orientation of the Adjacent pairs that keeps
// the Known orientations and adds no v-structure beyond those formed by Known
// edges. Meant as a test oracle on small graphs.
//
// Throws ValidationError for Unknown/SemiDirected pairs and TooLargeError
// when the number of Adjacent pairs exceeds pair_limit.
std::vector<Dag> enumerate_mec(const Pkg& pkg,
                               std::size_t pair_limit = kDefaultMecPairLimit);

}  // namespace causalip
