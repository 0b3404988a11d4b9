#pragma once

#include <initializer_list>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "causalip/dag.hpp"
#include "causalip/transitions.hpp"

namespace causalip {

// Vertices jointly intervened on in one experiment. Sorted, distinct.
class InterventionSet {
 public:
  InterventionSet() = default;
  explicit InterventionSet(std::vector<VertexId> members);
  InterventionSet(std::initializer_list<VertexId> members)
      : InterventionSet(std::vector<VertexId>(members)) {}

  bool contains(VertexId v) const;
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const std::vector<VertexId>& members() const { return members_; }

  friend auto operator<=>(const InterventionSet&, const InterventionSet&) = default;

 private:
  std::vector<VertexId> members_;
};

// Whether the test is meaningful under the intervention: O(i->j) needs i
// intervened and j not; A{i,j} needs neither intervened.
bool test_in_context(const Test& test, const InterventionSet& intervened);

// Perfect oracle over a ground-truth DAG. O(i->j) is present iff i->j is a
// truth edge; A{i,j} is present iff {i,j} is in the truth skeleton. Answers
// follow the order of `tests`.
//
// Throws TestContextError if any test is out of context, IndexError for
// vertices outside the graph.
std::vector<TestOutcome> answer_simulated(const Dag& truth,
                                          const InterventionSet& intervened,
                                          std::span<const Test> tests);

// Source of outcomes for the planner loop.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual std::vector<TestOutcome> answer(const InterventionSet& intervened,
                                          std::span<const Test> tests) = 0;
};

class SimulatedOracle final : public Oracle {
 public:
  explicit SimulatedOracle(Dag truth) : truth_(std::move(truth)) {}
  std::vector<TestOutcome> answer(const InterventionSet& intervened,
                                  std::span<const Test> tests) override {
    return answer_simulated(truth_, intervened, tests);
  }

 private:
  Dag truth_;
};

// One round of tests answered by an outside agent, one at a time. Recorded
// answers are immutable; every submission is appended to a ledger.
class InteractiveRound {
 public:
  explicit InteractiveRound(std::vector<Test> issued);

  // Throws UnknownTestError for a test that was never issued and
  // DuplicateSubmissionError for one already answered.
  void submit(const Test& test, Result result);

  bool complete() const { return answered_ == issued_.size(); }
  std::size_t pending_count() const { return issued_.size() - answered_; }

  const std::vector<Test>& issued() const { return issued_; }
  std::vector<Test> pending() const;
  std::optional<Result> result(const Test& test) const;

  // Answered outcomes in issue order.
  std::vector<TestOutcome> outcomes() const;
  // Submissions in arrival order.
  const std::vector<TestOutcome>& ledger() const { return ledger_; }

 private:
  std::vector<Test> issued_;
  std::vector<std::optional<Result>> results_;
  std::vector<TestOutcome> ledger_;
  std::size_t answered_ = 0;
};

}  // namespace causalip
