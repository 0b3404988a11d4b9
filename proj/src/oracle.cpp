#include "causalip/oracle.hpp"

#include <algorithm>

#include "causalip/errors.hpp"

namespace causalip {

InterventionSet::InterventionSet(std::vector<VertexId> members)
    : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool InterventionSet::contains(VertexId v) const {
  return std::binary_search(members_.begin(), members_.end(), v);
}

bool test_in_context(const Test& test, const InterventionSet& intervened) {
  if (test.kind == TestKind::kOrientation)
    return intervened.contains(test.from) && !intervened.contains(test.to);
  return !intervened.contains(test.from) && !intervened.contains(test.to);
}

std::vector<TestOutcome> answer_simulated(const Dag& truth,
                                          const InterventionSet& intervened,
                                          std::span<const Test> tests) {
  std::vector<TestOutcome> out;
  out.reserve(tests.size());
  for (const auto& t : tests) {
    if (t.from >= truth.size() || t.to >= truth.size() || t.from == t.to) {
      throw IndexError("test " + t.id() + " outside the graph");
    }
    if (!test_in_context(t, intervened)) {
      throw TestContextError("test " + t.id() +
                             " is meaningless under the chosen intervention");
    }
    // Intervening on the source severs to->from, so only from->to can show.
    bool present = t.kind == TestKind::kOrientation ? truth.has_edge(t.from, t.to)
                                                    : truth.adjacent(t.from, t.to);
    out.push_back({t, present ? Result::kPresent : Result::kAbsent});
  }
  return out;
}

InteractiveRound::InteractiveRound(std::vector<Test> issued)
    : issued_(std::move(issued)), results_(issued_.size()) {}

void InteractiveRound::submit(const Test& test, Result result) {
  auto it = std::find(issued_.begin(), issued_.end(), test);
  if (it == issued_.end()) {
    throw UnknownTestError("test " + test.id() + " was not issued this round");
  }
  auto& slot = results_[it - issued_.begin()];
  if (slot) {
    throw DuplicateSubmissionError("test " + test.id() + " is already answered");
  }
  slot = result;
  ++answered_;
  ledger_.push_back({test, result});
}

std::vector<Test> InteractiveRound::pending() const {
  std::vector<Test> out;
  for (std::size_t i = 0; i < issued_.size(); ++i)
    if (!results_[i]) out.push_back(issued_[i]);
  return out;
}

std::optional<Result> InteractiveRound::result(const Test& test) const {
  auto it = std::find(issued_.begin(), issued_.end(), test);
  if (it == issued_.end()) return std::nullopt;
  return results_[it - issued_.begin()];
}

std::vector<TestOutcome> InteractiveRound::outcomes() const {
  std::vector<TestOutcome> out;
  for (std::size_t i = 0; i < issued_.size(); ++i)
    if (results_[i]) out.push_back({issued_[i], *results_[i]});
  return out;
}

}  // namespace causalip
