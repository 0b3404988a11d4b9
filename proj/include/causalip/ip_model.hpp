#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "causalip/oracle.hpp"
#include "causalip/pkg.hpp"
#include "causalip/transitions.hpp"

namespace causalip {

// Extra cost charged when every member of `members` is intervened on in the
// same experiment.
struct Interaction {
  std::vector<VertexId> members;
  double delta_cost = 0.0;
};

// Per-vertex intervention and observation costs. Empty vectors mean the
// defaults: intervening costs 1, observing costs 0.
struct CostModel {
  std::vector<double> intervention;
  std::vector<double> observation;
  std::vector<Interaction> interactions;

  double intervention_cost(VertexId v) const {
    return intervention.empty() ? 1.0 : intervention[v];
  }
  double observation_cost(VertexId v) const {
    return observation.empty() ? 0.0 : observation[v];
  }
};

enum class ObjectiveKind { kPlain, kWeighted, kTargeted, kCostPenalty };

std::string_view to_string(ObjectiveKind kind);
std::optional<ObjectiveKind> parse_objective_kind(std::string_view name);

struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::kPlain;
  // Weighted and cost-penalty objectives. Pairs without an entry weigh 1.
  std::map<UnorderedPair, double> unknown_weights;
  std::map<UnorderedPair, double> semidirected_weights;
  std::map<UnorderedPair, double> adjacent_weights;
  // Targeted objective: only these pairs earn credit.
  std::set<UnorderedPair> relevant;
  // Cost-penalty objective: credit minus lambda * cost.
  double lambda = 0.0;

  double weight(EdgeClass cls, UnorderedPair pair) const;
};

struct BatchConfig {
  std::size_t count = 1;
  // Per-experiment budgets; empty means every experiment uses the round
  // budget (if any).
  std::vector<double> budgets;
  // Cap on the summed intervention cost (CI plus interaction terms) across the
  // batch.
  std::optional<double> total_budget;
  // Credit each uncertain pair at most once across the batch. Off by default:
  // the batch objective sums per-experiment credit.
  bool cap_pair_credit = false;
};

struct IpConfig {
  std::optional<double> budget;  // none: budget constraint omitted
  std::size_t k_max = 1;
  ObjectiveSpec objective;
  BatchConfig batch;
  // Up to this many viable vertices the solver enumerates every optimum and
  // samples among them; above it, it keeps a reservoir of the optima it meets.
  std::size_t exhaustive_tie_threshold = 18;
};

inline constexpr double kFeasibilityTolerance = 1e-9;

struct UncertainEdge {
  EdgeClass cls = EdgeClass::kUnknown;  // Unknown, SemiDirected or Adjacent
  // Candidate direction for SemiDirected; lo, hi otherwise.
  VertexId from = 0;
  VertexId to = 0;
  double weight = 1.0;
};

// One round's decision problem.
struct IpInstance {
  std::size_t n = 0;
  std::vector<VertexId> viable;
  std::vector<UncertainEdge> edges;
  CostModel costs;
  IpConfig config;

  // Decision variable index sets, as named in the LP dump.
  std::vector<DirectedEdge> orientation_vars;
  std::vector<UnorderedPair> adjacency_vars;
  std::size_t idu_count() const;
  std::size_t ids_count() const;
  std::size_t ida_count() const;

  bool is_viable(VertexId v) const;
  std::optional<double> experiment_budget(std::size_t batch) const;
};

// Throws ConfigError on k_max < 1, batch count < 1, negative weights, lambda
// or costs, malformed interactions, or cost vectors of the wrong size.
IpInstance build_instance(const Pkg& pkg, const CostModel& costs,
                          const IpConfig& config);

// sum CI over X + sum CO over viable vertices outside X + interaction terms
// for every subset fully inside X.
double cost_of(const InterventionSet& intervened, const CostModel& costs,
               std::span<const VertexId> viable);

// Intervention-side cost only: sum CI over X plus interaction terms.
double intervention_cost_of(const InterventionSet& intervened, const CostModel& costs);

// Test enabled for an uncertain edge under X, if any.
std::optional<Test> enabled_test(const UncertainEdge& edge, const InterventionSet& x);

std::vector<Test> enabled_tests(const IpInstance& instance, const InterventionSet& x);

struct EdgeCredit {
  UncertainEdge edge;
  std::optional<Test> test;
  double credit = 0.0;  // weight when a test is enabled, else 0
};

std::vector<EdgeCredit> credit_breakdown(const IpInstance& instance,
                                         const InterventionSet& x);

// Objective value of a batch of experiments (one set for a plain round).
double gain(const IpInstance& instance, std::span<const InterventionSet> batches);

// Single-experiment objective straight from a PKG.
double gain(const Pkg& pkg, const InterventionSet& x, const ObjectiveSpec& objective,
            const CostModel& costs = {});

// Whether the batch satisfies size, disjointness and budget constraints.
bool feasible(const IpInstance& instance, std::span<const InterventionSet> batches);

enum class SolveStatus { kOptimal };

struct IpSolution {
  std::vector<InterventionSet> batches;
  std::vector<std::vector<Test>> tests;  // enabled tests per experiment
  double objective = 0.0;
  SolveStatus status = SolveStatus::kOptimal;
  // Optima met during the search; all optima when optima_complete.
  std::vector<std::vector<InterventionSet>> optima;
  bool optima_complete = false;
  std::size_t nodes = 0;

  const InterventionSet& intervention() const { return batches.front(); }
};

// Exact depth-first branch-and-bound over membership of viable vertices.
// Ties are broken uniformly at random with `rng`.
//
// Throws InfeasibleError when no assignment meets the budgets.
IpSolution solve(const IpInstance& instance, std::mt19937_64& rng);

inline constexpr std::size_t kBruteForceViableLimit = 20;

// Reference solver: enumerates every feasible X (single experiment only) and
// returns all optima, sorted. Throws TooLargeError above viable_limit,
// ConfigError for batch instances, InfeasibleError if nothing is feasible.
IpSolution solve_bruteforce(const IpInstance& instance,
                            std::size_t viable_limit = kBruteForceViableLimit);

// CPLEX-LP style text of the instance, variables named X_i, O_i_j, A_i_j,
// IDU_i_j, IDS_i_j, IDA_i_j, Y_k (suffixed _b<k> per experiment when batched).
std::string to_lp(const IpInstance& instance);

}  // namespace causalip
