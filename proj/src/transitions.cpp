#include "causalip/transitions.hpp"

#include <charconv>
#include <map>

#include "causalip/errors.hpp"

namespace causalip {

std::string Test::id() const {
  return std::string(kind == TestKind::kOrientation ? "O_" : "A_") +
         std::to_string(from) + "_" + std::to_string(to);
}

std::optional<Test> Test::parse_id(std::string_view id) {
  if (id.size() < 5 || id[1] != '_') return std::nullopt;
  TestKind kind;
  if (id[0] == 'O') {
    kind = TestKind::kOrientation;
  } else if (id[0] == 'A') {
    kind = TestKind::kAdjacency;
  } else {
    return std::nullopt;
  }
  auto rest = id.substr(2);
  auto sep = rest.find('_');
  if (sep == std::string_view::npos) return std::nullopt;
  VertexId a = 0, b = 0;
  auto first = rest.substr(0, sep);
  auto second = rest.substr(sep + 1);
  auto r1 = std::from_chars(first.data(), first.data() + first.size(), a);
  auto r2 = std::from_chars(second.data(), second.data() + second.size(), b);
  if (r1.ec != std::errc{} || r1.ptr != first.data() + first.size() ||
      r2.ec != std::errc{} || r2.ptr != second.data() + second.size() ||
      first.empty() || second.empty() || a == b) {
    return std::nullopt;
  }
  if (kind == TestKind::kAdjacency) {
    if (a > b) return std::nullopt;
    return Test::adjacency(a, b);
  }
  return Test::orientation(a, b);
}

bool test_defined(const Pkg& pkg, const Test& test) {
  switch (pkg.edge_class(test.from, test.to)) {
    case EdgeClass::kUnknown:
      return true;
    case EdgeClass::kAdjacent:
      return test.kind == TestKind::kOrientation;
    case EdgeClass::kSemiDirected:
      return test.kind == TestKind::kAdjacency ||
             pkg.is_semidirected(test.from, test.to);
    default:
      return false;
  }
}

namespace {

// Possibilities that remain compatible with one outcome.
std::uint8_t compatible(const TestOutcome& o) {
  constexpr std::uint8_t kAll = Pkg::kNone | Pkg::kForward | Pkg::kBackward;
  const Test& t = o.test;
  if (t.kind == TestKind::kAdjacency) {
    return o.result == Result::kPresent ? (Pkg::kForward | Pkg::kBackward)
                                        : Pkg::kNone;
  }
  std::uint8_t tested = Pkg::bit_for(t.from, t.to);
  return o.result == Result::kPresent ? tested
                                      : static_cast<std::uint8_t>(kAll & ~tested);
}

}  // namespace

Pkg apply_outcomes(const Pkg& pkg, std::span<const TestOutcome> outcomes) {
  std::map<UnorderedPair, std::uint8_t> remaining;
  for (const auto& o : outcomes) {
    if (!test_defined(pkg, o.test)) {
      throw InvalidTestError("test " + o.test.id() + " is undefined for a " +
                             std::string(to_string(pkg.edge_class(o.test.from, o.test.to))) +
                             " pair");
    }
    auto [it, inserted] =
        remaining.try_emplace(o.test.pair(), pkg.possible(o.test.from, o.test.to));
    it->second &= compatible(o);
    if (it->second == 0) {
      throw ConflictError("outcomes for pair {" + std::to_string(it->first.lo) +
                          ", " + std::to_string(it->first.hi) +
                          "} contradict each other");
    }
  }
  Pkg next = pkg;
  for (const auto& [pair, mask] : remaining) next.set_possible(pair.lo, pair.hi, mask);
  return next;
}

}  // namespace causalip
