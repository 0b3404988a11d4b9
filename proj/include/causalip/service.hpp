#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "json.hpp"

#include "causalip/dag.hpp"
#include "causalip/ip_model.hpp"
#include "causalip/oracle.hpp"
#include "causalip/planner.hpp"

namespace causalip {

enum class SessionMode { kInteractive, kDemo };

struct SessionInit {
  std::optional<Pkg> pkg;    // required in interactive mode
  std::optional<Dag> truth;  // demo mode; pkg defaults to its essential graph
  PlannerConfig config;
  // Demo mode only: record outcomes that contradict the truth instead of
  // rejecting them.
  bool accept_contradictions = false;
};

struct OpenRound {
  std::size_t index = 0;
  Proposal proposal;
  std::vector<std::size_t> experiment_of;  // per issued test
  InteractiveRound answers;
};

struct SessionView {
  std::string id;
  SessionMode mode = SessionMode::kInteractive;
  Pkg pkg;
  std::size_t rounds_closed = 0;
  std::size_t ambiguity = 0;
  bool done = false;
  std::optional<std::size_t> open_round;
  std::size_t pending_tests = 0;
};

struct ProposalView {
  std::size_t round = 0;
  std::vector<InterventionSet> experiments;
  std::vector<Test> tests;
  std::vector<Test> pending;
  double gain = 0.0;
};

struct SubmitResult {
  bool round_closed = false;
  std::vector<Test> pending;
  std::optional<RoundLog> log;
  Pkg pkg;
  std::size_t ambiguity = 0;
};

struct WhatIfResult {
  double gain = 0.0;
  bool feasible = true;
  std::vector<EdgeCredit> breakdown;
};

// Session store for the interactive advisor loop. Each session keeps an
// append-only event log (created, proposed, outcome, closed) and a snapshot
// under data_dir/<id>/; constructing the service over an existing data_dir
// replays every log. Without a data_dir, sessions live in memory only.
//
// Calls on one session are serialized; different sessions run independently.
class AdvisorService {
 public:
  explicit AdvisorService(std::optional<std::filesystem::path> data_dir = std::nullopt);
  ~AdvisorService();

  AdvisorService(const AdvisorService&) = delete;
  AdvisorService& operator=(const AdvisorService&) = delete;

  // Throws ValidationError.
  std::string create_session(const SessionInit& init);

  // All below throw NotFoundError for unknown ids.
  SessionView get_session(const std::string& id);

  // Idempotent until outcomes arrive. Throws SessionDoneError.
  ProposalView get_proposal(const std::string& id);

  // Buffers outcomes; the round closes once every issued test is answered.
  // Throws UnknownTestError, DuplicateSubmissionError, ConflictError, and in
  // demo mode ContradictionError (nothing from the batch is recorded).
  SubmitResult submit_outcomes(const std::string& id, const std::vector<TestOutcome>& outcomes);

  // Pure evaluation of a hand-picked intervention set. Throws NotViableError.
  WhatIfResult whatif(const std::string& id, const InterventionSet& x);

  std::vector<RoundLog> history(const std::string& id);

  std::vector<std::string> session_ids() const;

 private:
  struct Session;

  Session& find(const std::string& id) const;
  void append_event(Session& s, const nlohmann::json& event);
  void write_snapshot(const Session& s);
  void replay(const std::filesystem::path& dir);
  ProposalView open_round(Session& s);
  void record_outcomes(Session& s, const std::vector<TestOutcome>& outcomes, bool log_events);
  std::optional<RoundLog> maybe_close(Session& s, bool log_events);

  std::optional<std::filesystem::path> data_dir_;
  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::unique_ptr<Session>> sessions_;
};

nlohmann::json view_to_json(const SessionView& view);
nlohmann::json proposal_to_json(const ProposalView& view);
nlohmann::json submit_to_json(const SubmitResult& result);
nlohmann::json whatif_to_json(const WhatIfResult& result);

// {"n": 3, "edges": [[0, 1], [1, 2]]}
nlohmann::json dag_to_json(const Dag& dag);
Dag dag_from_json(const nlohmann::json& doc);

}  // namespace causalip
