#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace causalip {

// 0-based vertex index.
using VertexId = std::uint32_t;

struct DirectedEdge {
  VertexId from = 0;
  VertexId to = 0;

  friend auto operator<=>(const DirectedEdge&, const DirectedEdge&) = default;
};

// Unordered vertex pair stored with lo < hi.
struct UnorderedPair {
  VertexId lo = 0;
  VertexId hi = 0;

  UnorderedPair() = default;
  UnorderedPair(VertexId a, VertexId b)
      : lo(a < b ? a : b), hi(a < b ? b : a) {}

  friend auto operator<=>(const UnorderedPair&, const UnorderedPair&) = default;
};

// Collider a -> center <- b with a < b and {a, b} non-adjacent.
struct VStructure {
  VertexId a = 0;
  VertexId center = 0;
  VertexId b = 0;

  friend auto operator<=>(const VStructure&, const VStructure&) = default;
};

// Immutable directed acyclic graph. Construct through validate_dag().
class Dag {
 public:
  Dag() = default;

  std::size_t size() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }

  // Edges sorted by (from, to).
  const std::vector<DirectedEdge>& edges() const { return edges_; }

  bool has_edge(VertexId from, VertexId to) const {
    return adjacency_[from * n_ + to] != 0;
  }
  bool adjacent(VertexId a, VertexId b) const {
    return has_edge(a, b) || has_edge(b, a);
  }

  const std::vector<VertexId>& parents(VertexId v) const { return parents_[v]; }
  const std::vector<VertexId>& children(VertexId v) const { return children_[v]; }

  std::vector<VertexId> topological_order() const;

  friend bool operator==(const Dag& lhs, const Dag& rhs) {
    return lhs.n_ == rhs.n_ && lhs.edges_ == rhs.edges_;
  }

 private:
  friend Dag validate_dag(std::size_t n, std::span<const DirectedEdge> edges);

  std::size_t n_ = 0;
  std::vector<DirectedEdge> edges_;
  std::vector<std::uint8_t> adjacency_;
  std::vector<std::vector<VertexId>> parents_;
  std::vector<std::vector<VertexId>> children_;
};

// Throws IndexError, SelfLoopError, DuplicateEdgeError (including an
// antiparallel pair), or CycleError naming one cycle.
Dag validate_dag(std::size_t n, std::span<const DirectedEdge> edges);

std::vector<UnorderedPair> skeleton(const Dag& dag);

std::vector<VStructure> v_structures(const Dag& dag);

}  // namespace causalip
