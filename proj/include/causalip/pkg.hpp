#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "causalip/dag.hpp"

namespace causalip {

enum class EdgeClass : std::uint8_t {
  kAbsent,
  kUnknown,
  kAdjacent,
  kSemiDirected,
  kKnown,
};

std::string_view to_string(EdgeClass c);

// Partially known graph: every unordered vertex pair carries exactly one
// EdgeClass. Known and SemiDirected pairs also carry a direction.
//
// Internally a pair is the set of structures still possible for it, drawn
// from {no edge, lo->hi, hi->lo}. Knowledge only ever removes possibilities,
// which is what makes test outcomes monotone.
class Pkg {
 public:
  // Bits of a pair's possibility set.
  enum : std::uint8_t {
    kNone = 1,
    kForward = 2,   // lo -> hi
    kBackward = 4,  // hi -> lo
  };

  Pkg() = default;
  // All pairs Absent.
  explicit Pkg(std::size_t n);

  static Pkg all_unknown(std::size_t n);

  std::size_t size() const { return n_; }

  EdgeClass edge_class(VertexId a, VertexId b) const;

  // True when the pair is Known with direction from -> to.
  bool is_known(VertexId from, VertexId to) const {
    return possible(from, to) == bit_for(from, to);
  }
  // True when the pair is SemiDirected with candidate direction from -> to.
  bool is_semidirected(VertexId from, VertexId to) const {
    return possible(from, to) == (kNone | bit_for(from, to));
  }
  bool is_adjacent(VertexId a, VertexId b) const {
    return possible(a, b) == (kForward | kBackward);
  }
  bool is_absent(VertexId a, VertexId b) const {
    return possible(a, b) == kNone;
  }
  bool is_unknown(VertexId a, VertexId b) const {
    return possible(a, b) == (kNone | kForward | kBackward);
  }
  bool is_resolved(VertexId a, VertexId b) const {
    auto c = edge_class(a, b);
    return c == EdgeClass::kKnown || c == EdgeClass::kAbsent;
  }

  // Direction of a Known or SemiDirected pair.
  std::optional<DirectedEdge> direction(VertexId a, VertexId b) const;

  void set_absent(VertexId a, VertexId b) { set(a, b, kNone); }
  void set_unknown(VertexId a, VertexId b) {
    set(a, b, kNone | kForward | kBackward);
  }
  void set_adjacent(VertexId a, VertexId b) { set(a, b, kForward | kBackward); }
  void set_known(VertexId from, VertexId to) { set(from, to, bit_for(from, to)); }
  void set_semidirected(VertexId from, VertexId to) {
    set(from, to, kNone | bit_for(from, to));
  }

  // Raw possibility set of a pair (bits above, relative to lo < hi).
  std::uint8_t possible(VertexId a, VertexId b) const;
  void set_possible(VertexId a, VertexId b, std::uint8_t mask) { set(a, b, mask); }

  // Bit standing for the directed edge from -> to.
  static std::uint8_t bit_for(VertexId from, VertexId to) {
    return from < to ? kForward : kBackward;
  }

  // Listings, each sorted.
  std::vector<DirectedEdge> known_edges() const;
  std::vector<DirectedEdge> semidirected_edges() const;
  std::vector<UnorderedPair> adjacent_pairs() const;
  std::vector<UnorderedPair> unknown_pairs() const;
  std::vector<UnorderedPair> absent_pairs() const;

  friend bool operator==(const Pkg&, const Pkg&) = default;

 private:
  std::size_t index(VertexId a, VertexId b) const;
  void set(VertexId a, VertexId b, std::uint8_t mask);

  std::size_t n_ = 0;
  std::vector<std::uint8_t> pairs_;  // upper triangle, row-major
};

// Number of pairs not yet Known or Absent.
std::size_t ambiguity(const Pkg& pkg);

// Vertices incident to an Unknown, Adjacent or SemiDirected pair, ascending.
std::vector<VertexId> viable_vertices(const Pkg& pkg);

// Throws InconsistentPkgError if Known edges contain a directed cycle.
void check_known_acyclic(const Pkg& pkg);

// Ground-truth view: every edge Known, every non-edge Absent.
Pkg fully_resolved(const Dag& dag);

}  // namespace causalip
