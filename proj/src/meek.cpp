#include "causalip/meek.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <sstream>

#include "causalip/errors.hpp"

namespace causalip {

std::string_view to_string(MeekRule rule) {
  switch (rule) {
    case MeekRule::kR1: return "R1";
    case MeekRule::kR2: return "R2";
    case MeekRule::kR3: return "R3";
    case MeekRule::kR4: return "R4";
  }
  return "?";
}

namespace {

void erase_value(std::vector<VertexId>& v, VertexId x) {
  v.erase(std::remove(v.begin(), v.end(), x), v.end());
}

class MeekEngine {
 public:
  MeekEngine(const Pkg& pkg, std::optional<std::uint64_t> seed)
      : pkg_(pkg),
        undirected_(pkg.size()),
        parents_(pkg.size()),
        children_(pkg.size()),
        queued_(pkg.size() * pkg.size(), 0) {
    if (seed) rng_.emplace(*seed);
    const auto n = static_cast<VertexId>(pkg.size());
    for (VertexId i = 0; i < n; ++i) {
      for (VertexId j = i + 1; j < n; ++j) {
        if (pkg_.is_adjacent(i, j)) {
          undirected_[i].push_back(j);
          undirected_[j].push_back(i);
        } else if (pkg_.edge_class(i, j) == EdgeClass::kKnown) {
          auto e = *pkg_.direction(i, j);
          children_[e.from].push_back(e.to);
          parents_[e.to].push_back(e.from);
        }
      }
    }
  }

  MeekResult run() {
    check_known_acyclic(pkg_);
    std::vector<UnorderedPair> initial = pkg_.adjacent_pairs();
    if (rng_) std::shuffle(initial.begin(), initial.end(), *rng_);
    for (const auto& p : initial) enqueue(p.lo, p.hi);

    while (!queue_.empty()) {
      UnorderedPair p = queue_.front();
      queue_.pop_front();
      queued_[p.lo * pkg_.size() + p.hi] = 0;
      if (!pkg_.is_adjacent(p.lo, p.hi)) continue;

      DirectedEdge candidates[2] = {{p.lo, p.hi}, {p.hi, p.lo}};
      if (rng_ && (*rng_)() % 2 == 1) std::swap(candidates[0], candidates[1]);
      for (const auto& c : candidates) {
        if (auto rule = firing_rule(c.from, c.to)) {
          orient(c.from, c.to, *rule);
          break;
        }
      }
    }
    return {std::move(pkg_), std::move(steps_)};
  }

 private:
  bool known(VertexId from, VertexId to) const { return pkg_.is_known(from, to); }
  bool absent(VertexId a, VertexId b) const { return pkg_.is_absent(a, b); }

  // Rule that orients a - b as a -> b, if any.
  std::optional<MeekRule> firing_rule(VertexId a, VertexId b) const {
    for (VertexId c : parents_[a])
      if (absent(c, b)) return MeekRule::kR1;

    for (VertexId k : children_[a])
      if (known(k, b)) return MeekRule::kR2;

    std::vector<VertexId> into_b;
    for (VertexId k : undirected_[a])
      if (k != b && known(k, b)) into_b.push_back(k);
    for (std::size_t x = 0; x < into_b.size(); ++x)
      for (std::size_t y = x + 1; y < into_b.size(); ++y)
        if (absent(into_b[x], into_b[y])) return MeekRule::kR3;

    // d -> m -> b with a - m, a - d and {b, d} absent.
    for (VertexId m : parents_[b]) {
      if (!pkg_.is_adjacent(a, m)) continue;
      for (VertexId d : parents_[m])
        if (d != a && pkg_.is_adjacent(a, d) && absent(b, d))
          return MeekRule::kR4;
    }
    return std::nullopt;
  }

  void orient(VertexId a, VertexId b, MeekRule rule) {
    if (reaches(b, a)) {
      std::ostringstream msg;
      msg << "orienting " << a << "->" << b << " by " << to_string(rule)
          << " closes a directed cycle";
      throw InconsistentPkgError(msg.str());
    }
    pkg_.set_known(a, b);
    steps_.push_back({{a, b}, rule});
    erase_value(undirected_[a], b);
    erase_value(undirected_[b], a);
    children_[a].push_back(b);
    parents_[b].push_back(a);

    // Pairs whose rule premises may have just become true.
    touch(a);
    touch(b);
    for (VertexId d : undirected_[a]) touch(d);
  }

  void touch(VertexId v) {
    for (VertexId w : undirected_[v]) enqueue(v, w);
  }

  void enqueue(VertexId a, VertexId b) {
    UnorderedPair p(a, b);
    auto& flag = queued_[p.lo * pkg_.size() + p.hi];
    if (flag) return;
    flag = 1;
    queue_.push_back(p);
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

  Pkg pkg_;
  std::vector<std::vector<VertexId>> undirected_;
  std::vector<std::vector<VertexId>> parents_;
  std::vector<std::vector<VertexId>> children_;
  std::vector<char> queued_;
  std::deque<UnorderedPair> queue_;
  std::vector<MeekStep> steps_;
  std::optional<std::mt19937_64> rng_;
};

}  // namespace

MeekResult meek_propagate(const Pkg& pkg, std::optional<std::uint64_t> shuffle_seed) {
  return MeekEngine(pkg, shuffle_seed).run();
}

}  // namespace causalip
