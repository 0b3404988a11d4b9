#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "causalip/dag.hpp"

namespace causalip {

struct ErdosRenyiSpec {
  std::size_t n = 1;
  double p = 0.0;
  std::uint64_t seed = 0;
};

// G(n, p) skeleton oriented along the identity order (every edge lo -> hi).
//
// Stream: std::mt19937_64 seeded with std::seed_seq{seed & 0xffffffff,
// seed >> 32}; pairs are visited as (0,1), (0,2), ..., (0,n-1), (1,2), ...
// and each draws u = (next() >> 11) * 2^-53, keeping the edge when u < p.
//
// Throws ConfigError when n < 1 or p lies outside [0, 1].
Dag erdos_renyi_dag(const ErdosRenyiSpec& spec);

struct NamedDag {
  Dag dag;
  std::vector<std::string> names;  // may be empty
};

// Edge-list text: one "i j" pair per line meaning i -> j; '#' starts a
// comment; blank lines are ignored. A "# nodes N" comment fixes the vertex
// count (otherwise max index + 1) and "# name I LABEL" records a vertex name.
//
// Throws ParseError (with the line number) or the validate_dag errors.
NamedDag load_edge_list(std::string_view text);

// Canonical text: "# nodes N", optional names, then sorted edges.
std::string save_edge_list(const Dag& dag, const std::vector<std::string>& names = {});

// Structure-only BIF reader: variable declarations give vertex names in
// order, "probability ( child | parent, ... )" headers give parent sets.
// CPT bodies are skipped.
NamedDag load_bif_structure(std::string_view text);

NamedDag load_graph_file(const std::string& path);

struct GraphStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t min_degree = 0;
  double avg_degree = 0.0;
  std::size_t max_degree = 0;
  double stdev_degree = 0.0;  // sample standard deviation
  std::size_t v_structures = 0;
};

GraphStats structural_stats(const Dag& dag);

}  // namespace causalip
