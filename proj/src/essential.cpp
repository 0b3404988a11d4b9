#include "causalip/essential.hpp"

#include <string>

#include "causalip/errors.hpp"
#include "causalip/meek.hpp"

namespace causalip {

Pkg cpdag_of(const Dag& dag) {
  Pkg pkg(dag.size());
  for (const auto& p : skeleton(dag)) pkg.set_adjacent(p.lo, p.hi);
  for (const auto& v : v_structures(dag)) {
    pkg.set_known(v.a, v.center);
    pkg.set_known(v.b, v.center);
  }
  return meek_closure(pkg);
}

namespace {

class MecEnumerator {
 public:
  explicit MecEnumerator(const Pkg& pkg)
      : pkg_(pkg),
        pairs_(pkg.adjacent_pairs()),
        parents_(pkg.size()),
        children_(pkg.size()) {
    for (const auto& e : pkg.known_edges()) add(e);
  }

  std::vector<Dag> run() {
    extend(0);
    return std::move(members_);
  }

 private:
  void add(DirectedEdge e) {
    children_[e.from].push_back(e.to);
    parents_[e.to].push_back(e.from);
  }
  void remove(DirectedEdge e) {
    children_[e.from].pop_back();
    parents_[e.to].pop_back();
  }

  bool reaches(VertexId from, VertexId to) const {
    std::vector<char> seen(pkg_.size(), 0);
    std::vector<VertexId> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      if (v == to) return true;
      for (VertexId w : children_[v])
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
    return false;
  }

  // An oriented Adjacent pair may not take part in any collider: the MEC's
  // v-structures are exactly those already fixed by Known edges.
  bool creates_collider(DirectedEdge e) const {
    for (VertexId z : parents_[e.to])
      if (pkg_.is_absent(z, e.from)) return true;
    return false;
  }

  void extend(std::size_t next) {
    if (next == pairs_.size()) {
      std::vector<DirectedEdge> edges;
      for (VertexId v = 0; v < pkg_.size(); ++v)
        for (VertexId w : children_[v]) edges.push_back({v, w});
      members_.push_back(validate_dag(pkg_.size(), edges));
      return;
    }
    const auto& p = pairs_[next];
    for (DirectedEdge e : {DirectedEdge{p.lo, p.hi}, DirectedEdge{p.hi, p.lo}}) {
      if (reaches(e.to, e.from) || creates_collider(e)) continue;
      add(e);
      extend(next + 1);
      remove(e);
    }
  }

  const Pkg& pkg_;
  std::vector<UnorderedPair> pairs_;
  std::vector<std::vector<VertexId>> parents_;
  std::vector<std::vector<VertexId>> children_;
  std::vector<Dag> members_;
};

}  // namespace

std::vector<Dag> enumerate_mec(const Pkg& pkg, std::size_t pair_limit) {
  if (!pkg.unknown_pairs().empty() || !pkg.semidirected_edges().empty()) {
    throw ValidationError(
        "MEC enumeration needs a PKG with only known, adjacent and absent pairs");
  }
  std::size_t count = pkg.adjacent_pairs().size();
  if (count > pair_limit) {
    throw TooLargeError(std::to_string(count) + " adjacent pairs exceed limit " +
                        std::to_string(pair_limit));
  }
  check_known_acyclic(pkg);
  return MecEnumerator(pkg).run();
}

}  // namespace causalip
