#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "causalip/pkg.hpp"

namespace causalip {

enum class TestKind : std::uint8_t { kOrientation, kAdjacency };

// O(from->to) or A{from, to}. Adjacency tests are normalized so from < to.
struct Test {
  TestKind kind = TestKind::kOrientation;
  VertexId from = 0;
  VertexId to = 0;

  static Test orientation(VertexId from, VertexId to) {
    return {TestKind::kOrientation, from, to};
  }
  static Test adjacency(VertexId a, VertexId b) {
    UnorderedPair p(a, b);
    return {TestKind::kAdjacency, p.lo, p.hi};
  }

  UnorderedPair pair() const { return {from, to}; }

  // "O_1_0" or "A_0_2"; matches the LP variable naming.
  std::string id() const;
  static std::optional<Test> parse_id(std::string_view id);

  friend auto operator<=>(const Test&, const Test&) = default;
};

enum class Result : std::uint8_t { kAbsent, kPresent };

struct TestOutcome {
  Test test;
  Result result = Result::kAbsent;

  friend auto operator<=>(const TestOutcome&, const TestOutcome&) = default;
};

// Whether `test` is defined for the pair's current class: orientation tests
// on Unknown, Adjacent, or SemiDirected in the candidate direction; adjacency
// tests on Unknown or SemiDirected.
bool test_defined(const Pkg& pkg, const Test& test);

// Applies one batch of outcomes. Each outcome removes the structures it rules
// out from its pair; the classes that result are exactly:
//   Unknown      + O(i->j) present -> Known i->j, absent -> SemiDirected j->i
//   Unknown      + A present -> Adjacent, absent -> Absent
//   SemiDirected + O/A present -> Known, absent -> Absent
//   Adjacent     + O(i->j) present -> Known i->j, absent -> Known j->i
// Outcomes on the same pair combine.
//
// Throws InvalidTestError when a test is undefined for its pair's class
// (judged on the input PKG) and ConflictError when outcomes in the batch
// contradict each other.
Pkg apply_outcomes(const Pkg& pkg, std::span<const TestOutcome> outcomes);

}  // namespace causalip
