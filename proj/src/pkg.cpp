#include "causalip/pkg.hpp"

#include <algorithm>
#include <sstream>

#include "causalip/errors.hpp"

namespace causalip {

std::string_view to_string(EdgeClass c) {
  switch (c) {
    case EdgeClass::kAbsent: return "absent";
    case EdgeClass::kUnknown: return "unknown";
    case EdgeClass::kAdjacent: return "adjacent";
    case EdgeClass::kSemiDirected: return "semidirected";
    case EdgeClass::kKnown: return "known";
  }
  return "?";
}

Pkg::Pkg(std::size_t n) : n_(n), pairs_(n * (n > 0 ? n - 1 : 0) / 2, kNone) {}

Pkg Pkg::all_unknown(std::size_t n) {
  Pkg pkg(n);
  for (auto& p : pkg.pairs_) p = kNone | kForward | kBackward;
  return pkg;
}

std::size_t Pkg::index(VertexId a, VertexId b) const {
  if (a >= n_ || b >= n_ || a == b) {
    std::ostringstream msg;
    msg << "pair {" << a << ", " << b << "} invalid for " << n_ << " vertices";
    throw IndexError(msg.str());
  }
  std::size_t lo = a < b ? a : b;
  std::size_t hi = a < b ? b : a;
  return lo * n_ - lo * (lo + 1) / 2 + (hi - lo - 1);
}

std::uint8_t Pkg::possible(VertexId a, VertexId b) const {
  return pairs_[index(a, b)];
}

void Pkg::set(VertexId a, VertexId b, std::uint8_t mask) {
  pairs_[index(a, b)] = mask;
}

EdgeClass Pkg::edge_class(VertexId a, VertexId b) const {
  switch (possible(a, b)) {
    case kNone: return EdgeClass::kAbsent;
    case kForward:
    case kBackward: return EdgeClass::kKnown;
    case kNone | kForward:
    case kNone | kBackward: return EdgeClass::kSemiDirected;
    case kForward | kBackward: return EdgeClass::kAdjacent;
    default: return EdgeClass::kUnknown;
  }
}

std::optional<DirectedEdge> Pkg::direction(VertexId a, VertexId b) const {
  VertexId lo = a < b ? a : b;
  VertexId hi = a < b ? b : a;
  std::uint8_t mask = possible(a, b);
  auto cls = edge_class(a, b);
  if (cls != EdgeClass::kKnown && cls != EdgeClass::kSemiDirected) return {};
  if (mask & kForward) return DirectedEdge{lo, hi};
  return DirectedEdge{hi, lo};
}

std::vector<DirectedEdge> Pkg::known_edges() const {
  std::vector<DirectedEdge> out;
  for (VertexId i = 0; i < n_; ++i)
    for (VertexId j = i + 1; j < n_; ++j)
      if (edge_class(i, j) == EdgeClass::kKnown) out.push_back(*direction(i, j));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<DirectedEdge> Pkg::semidirected_edges() const {
  std::vector<DirectedEdge> out;
  for (VertexId i = 0; i < n_; ++i)
    for (VertexId j = i + 1; j < n_; ++j)
      if (edge_class(i, j) == EdgeClass::kSemiDirected)
        out.push_back(*direction(i, j));
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::vector<UnorderedPair> pairs_of(const Pkg& pkg, EdgeClass cls) {
  std::vector<UnorderedPair> out;
  for (VertexId i = 0; i < pkg.size(); ++i)
    for (VertexId j = i + 1; j < pkg.size(); ++j)
      if (pkg.edge_class(i, j) == cls) out.emplace_back(i, j);
  return out;
}

}  // namespace

std::vector<UnorderedPair> Pkg::adjacent_pairs() const {
  return pairs_of(*this, EdgeClass::kAdjacent);
}
std::vector<UnorderedPair> Pkg::unknown_pairs() const {
  return pairs_of(*this, EdgeClass::kUnknown);
}
std::vector<UnorderedPair> Pkg::absent_pairs() const {
  return pairs_of(*this, EdgeClass::kAbsent);
}

std::size_t ambiguity(const Pkg& pkg) {
  std::size_t count = 0;
  for (VertexId i = 0; i < pkg.size(); ++i)
    for (VertexId j = i + 1; j < pkg.size(); ++j)
      if (!pkg.is_resolved(i, j)) ++count;
  return count;
}

std::vector<VertexId> viable_vertices(const Pkg& pkg) {
  std::vector<bool> viable(pkg.size(), false);
  for (VertexId i = 0; i < pkg.size(); ++i)
    for (VertexId j = i + 1; j < pkg.size(); ++j)
      if (!pkg.is_resolved(i, j)) viable[i] = viable[j] = true;
  std::vector<VertexId> out;
  for (VertexId v = 0; v < pkg.size(); ++v)
    if (viable[v]) out.push_back(v);
  return out;
}

void check_known_acyclic(const Pkg& pkg) {
  try {
    (void)validate_dag(pkg.size(), pkg.known_edges());
  } catch (const CycleError& e) {
    throw InconsistentPkgError(std::string("known edges contain a ") + e.what());
  }
}

Pkg fully_resolved(const Dag& dag) {
  Pkg pkg(dag.size());
  for (const auto& e : dag.edges()) pkg.set_known(e.from, e.to);
  return pkg;
}

}  // namespace causalip
