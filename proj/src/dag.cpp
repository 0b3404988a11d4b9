#include "causalip/dag.hpp"

#include <algorithm>
#include <sstream>
#include <string>

#include "causalip/errors.hpp"

namespace causalip {

namespace {

// Returns one directed cycle, or an empty vector when the graph is acyclic.
std::vector<VertexId> find_cycle(
    std::size_t n, const std::vector<std::vector<VertexId>>& children) {
  enum class Mark : std::uint8_t { kWhite, kGrey, kBlack };
  std::vector<Mark> mark(n, Mark::kWhite);
  std::vector<VertexId> parent(n, 0);

  for (VertexId root = 0; root < n; ++root) {
    if (mark[root] != Mark::kWhite) continue;
    // Iterative DFS: stack of (vertex, next child index).
    std::vector<std::pair<VertexId, std::size_t>> stack{{root, 0}};
    mark[root] = Mark::kGrey;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next == children[v].size()) {
        mark[v] = Mark::kBlack;
        stack.pop_back();
        continue;
      }
      VertexId w = children[v][next++];
      if (mark[w] == Mark::kGrey) {
        std::vector<VertexId> cycle{w};
        for (VertexId u = v; u != w; u = parent[u]) cycle.push_back(u);
        std::reverse(cycle.begin() + 1, cycle.end());
        return cycle;
      }
      if (mark[w] == Mark::kWhite) {
        mark[w] = Mark::kGrey;
        parent[w] = v;
        stack.emplace_back(w, 0);
      }
    }
  }
  return {};
}

}  // namespace

Dag validate_dag(std::size_t n, std::span<const DirectedEdge> edges) {
  Dag dag;
  dag.n_ = n;
  dag.adjacency_.assign(n * n, 0);
  dag.parents_.resize(n);
  dag.children_.resize(n);

  for (const auto& e : edges) {
    if (e.from >= n || e.to >= n) {
      std::ostringstream msg;
      msg << "edge " << e.from << "->" << e.to << " out of range for " << n
          << " vertices";
      throw IndexError(msg.str());
    }
    if (e.from == e.to) {
      throw SelfLoopError("self-loop at vertex " + std::to_string(e.from));
    }
    if (dag.adjacent(e.from, e.to)) {
      std::ostringstream msg;
      msg << "more than one edge between " << e.from << " and " << e.to;
      if (dag.has_edge(e.to, e.from)) {
        throw CycleError(msg.str() + " (cycle " + std::to_string(e.from) +
                         " -> " + std::to_string(e.to) + " -> " +
                         std::to_string(e.from) + ")");
      }
      throw DuplicateEdgeError(msg.str());
    }
    dag.adjacency_[e.from * n + e.to] = 1;
    dag.edges_.push_back(e);
  }

  std::sort(dag.edges_.begin(), dag.edges_.end());
  for (const auto& e : dag.edges_) {
    dag.children_[e.from].push_back(e.to);
    dag.parents_[e.to].push_back(e.from);
  }
  for (auto& p : dag.parents_) std::sort(p.begin(), p.end());

  if (auto cycle = find_cycle(n, dag.children_); !cycle.empty()) {
    std::ostringstream msg;
    msg << "cycle ";
    for (VertexId v : cycle) msg << v << " -> ";
    msg << cycle.front();
    throw CycleError(msg.str());
  }
  return dag;
}

std::vector<VertexId> Dag::topological_order() const {
  std::vector<std::size_t> indegree(n_);
  for (VertexId v = 0; v < n_; ++v) indegree[v] = parents_[v].size();
  std::vector<VertexId> order;
  order.reserve(n_);
  for (VertexId v = 0; v < n_; ++v)
    if (indegree[v] == 0) order.push_back(v);
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (VertexId w : children_[order[head]])
      if (--indegree[w] == 0) order.push_back(w);
  }
  return order;
}

std::vector<UnorderedPair> skeleton(const Dag& dag) {
  std::vector<UnorderedPair> pairs;
  pairs.reserve(dag.edge_count());
  for (const auto& e : dag.edges()) pairs.emplace_back(e.from, e.to);
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

std::vector<VStructure> v_structures(const Dag& dag) {
  std::vector<VStructure> result;
  for (VertexId c = 0; c < dag.size(); ++c) {
    const auto& pa = dag.parents(c);
    for (std::size_t x = 0; x < pa.size(); ++x) {
      for (std::size_t y = x + 1; y < pa.size(); ++y) {
        if (!dag.adjacent(pa[x], pa[y])) result.push_back({pa[x], c, pa[y]});
      }
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

}  // namespace causalip
