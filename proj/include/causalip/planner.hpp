#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "causalip/errors.hpp"
#include "causalip/ip_model.hpp"
#include "causalip/meek.hpp"
#include "causalip/oracle.hpp"
#include "causalip/pkg.hpp"

namespace causalip {

enum class Strategy { kIp, kRandom };

std::string_view to_string(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view name);

// Per-round override of the round budget and k_max.
struct RoundLimits {
  std::optional<double> budget;
  std::optional<std::size_t> k_max;
};
using DynamicLimits = std::function<RoundLimits(std::size_t round, const Pkg& pkg)>;

struct PlannerConfig {
  Strategy strategy = Strategy::kIp;
  IpConfig ip;  // k_max, budget, objective, batch
  CostModel costs;
  std::size_t max_rounds = 0;  // 0: 4 * C(n, 2)
  std::uint64_t seed = 0;
  DynamicLimits dynamic_limits;
};

// Default runaway guard.
std::size_t default_max_rounds(std::size_t n);

// Round-local generator seeded from (seed, round index).
std::mt19937_64 round_rng(std::uint64_t seed, std::size_t round);

// The round's experiments and the tests each one enables.
struct Proposal {
  std::vector<InterventionSet> experiments;
  std::vector<std::vector<Test>> tests;
  double objective = 0.0;

  std::size_t manipulations() const;
  std::vector<Test> all_tests() const;
};

// ip: solve(build_instance(...)); random: min(k_max, |viable| - 1) distinct
// viable vertices per experiment, uniformly (intervening on every viable
// vertex enables no test). Throws NothingToDoError when the PKG is already
// resolved.
Proposal propose(const Pkg& pkg, const PlannerConfig& config, std::size_t round,
                 std::mt19937_64& rng);

struct PairChange {
  UnorderedPair pair;
  EdgeClass before;
  EdgeClass after;
  std::optional<DirectedEdge> direction;  // after, when Known/SemiDirected
};

struct RoundLog {
  std::size_t index = 0;
  std::vector<InterventionSet> experiments;
  std::vector<Test> tests;
  std::vector<TestOutcome> outcomes;
  double objective = 0.0;
  std::vector<PairChange> transitions;
  std::vector<MeekStep> meek;
  std::size_t ambiguity_before = 0;
  std::size_t ambiguity_after = 0;
};

// Applies the outcomes of a proposal, then Meek closure.
std::pair<Pkg, RoundLog> close_round(const Pkg& pkg, const Proposal& proposal,
                                     std::span<const TestOutcome> outcomes,
                                     std::size_t index);

// propose, ask the oracle per experiment, close_round.
std::pair<Pkg, RoundLog> run_round(const Pkg& pkg, const PlannerConfig& config,
                                   Oracle& oracle, std::size_t index);

enum class Termination { kSuccess, kRoundCap };

struct RunRecord {
  std::vector<RoundLog> rounds;
  std::size_t total_manipulations = 0;
  std::size_t initial_ambiguity = 0;
  Termination terminated = Termination::kSuccess;
  Pkg final_pkg;

  std::size_t round_count() const { return rounds.size(); }
};

class RoundCapError : public Error {
 public:
  RoundCapError(const std::string& message, RunRecord record)
      : Error("RoundCapError", message), record_(std::move(record)) {}
  const RunRecord& record() const { return record_; }

 private:
  RunRecord record_;
};

// Loops rounds until nothing is ambiguous. Throws RoundCapError (carrying the
// partial record) if max_rounds is reached first.
RunRecord run(const Pkg& initial, const PlannerConfig& config, Oracle& oracle);

// Simulation from the essential graph of `truth`.
RunRecord simulate(const Dag& truth, const PlannerConfig& config);

// Everything except dynamic_limits round-trips.
nlohmann::json config_to_json(const PlannerConfig& config);
// Missing fields keep their defaults. Throws ConfigError.
PlannerConfig config_from_json(const nlohmann::json& doc);
nlohmann::json round_to_json(const RoundLog& log);
nlohmann::json run_to_json(const RunRecord& record, const PlannerConfig& config);

}  // namespace causalip
