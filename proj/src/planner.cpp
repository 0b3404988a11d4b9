#include "causalip/planner.hpp"

#include <algorithm>
#include <map>

#include "causalip/essential.hpp"
#include "causalip/serialization.hpp"

namespace causalip {

using nlohmann::json;

std::string_view to_string(Strategy s) {
  return s == Strategy::kIp ? "ip" : "random";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  if (name == "ip") return Strategy::kIp;
  if (name == "random" || name == "r") return Strategy::kRandom;
  return std::nullopt;
}

std::size_t default_max_rounds(std::size_t n) {
  return std::max<std::size_t>(1, 4 * (n * (n > 0 ? n - 1 : 0) / 2));
}

std::mt19937_64 round_rng(std::uint64_t seed, std::size_t round) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(round),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(round) >> 32)};
  return std::mt19937_64(seq);
}

std::size_t Proposal::manipulations() const {
  std::size_t total = 0;
  for (const auto& x : experiments) total += x.size();
  return total;
}

std::vector<Test> Proposal::all_tests() const {
  std::vector<Test> out;
  for (const auto& t : tests) out.insert(out.end(), t.begin(), t.end());
  return out;
}

Proposal propose(const Pkg& pkg, const PlannerConfig& config, std::size_t round,
                 std::mt19937_64& rng) {
  if (ambiguity(pkg) == 0) throw NothingToDoError("every pair is already resolved");

  IpConfig ip = config.ip;
  if (config.dynamic_limits) {
    RoundLimits limits = config.dynamic_limits(round, pkg);
    if (limits.budget) ip.budget = limits.budget;
    if (limits.k_max) ip.k_max = *limits.k_max;
  }
  IpInstance instance = build_instance(pkg, config.costs, ip);

  Proposal proposal;
  if (config.strategy == Strategy::kIp) {
    IpSolution sol = solve(instance, rng);
    proposal.experiments = std::move(sol.batches);
    proposal.tests = std::move(sol.tests);
    proposal.objective = sol.objective;
    return proposal;
  }

  // Random baseline: disjoint uniform samples, as large as k_max allows but
  // never the whole viable set, which enables no test at all.
  std::vector<VertexId> pool = instance.viable;
  const std::size_t cap = std::min(ip.k_max, instance.viable.size() - 1);
  for (std::size_t b = 0; b < ip.batch.count; ++b) {
    std::size_t take = std::min(cap, pool.size());
    for (std::size_t k = 0; k < take; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, pool.size() - 1);
      std::swap(pool[k], pool[pick(rng)]);
    }
    std::vector<VertexId> chosen(pool.begin(), pool.begin() + take);
    pool.erase(pool.begin(), pool.begin() + take);
    proposal.experiments.emplace_back(std::move(chosen));
  }
  for (const auto& x : proposal.experiments)
    proposal.tests.push_back(enabled_tests(instance, x));
  proposal.objective = gain(instance, proposal.experiments);
  return proposal;
}

std::pair<Pkg, RoundLog> close_round(const Pkg& pkg, const Proposal& proposal,
                                     std::span<const TestOutcome> outcomes,
                                     std::size_t index) {
  RoundLog log;
  log.index = index;
  log.experiments = proposal.experiments;
  log.tests = proposal.all_tests();
  log.outcomes.assign(outcomes.begin(), outcomes.end());
  log.objective = proposal.objective;
  log.ambiguity_before = ambiguity(pkg);

  Pkg updated = apply_outcomes(pkg, outcomes);
  std::map<UnorderedPair, bool> touched;
  for (const auto& o : outcomes) touched[o.test.pair()] = true;
  for (const auto& [pair, unused] : touched) {
    EdgeClass before = pkg.edge_class(pair.lo, pair.hi);
    EdgeClass after = updated.edge_class(pair.lo, pair.hi);
    if (before != after || pkg.possible(pair.lo, pair.hi) != updated.possible(pair.lo, pair.hi))
      log.transitions.push_back({pair, before, after, updated.direction(pair.lo, pair.hi)});
  }

  MeekResult closed = meek_propagate(updated);
  log.meek = std::move(closed.steps);
  log.ambiguity_after = ambiguity(closed.pkg);
  return {std::move(closed.pkg), std::move(log)};
}

std::pair<Pkg, RoundLog> run_round(const Pkg& pkg, const PlannerConfig& config,
                                   Oracle& oracle, std::size_t index) {
  auto rng = round_rng(config.seed, index);
  Proposal proposal = propose(pkg, config, index, rng);
  std::vector<TestOutcome> outcomes;
  for (std::size_t b = 0; b < proposal.experiments.size(); ++b) {
    auto answers = oracle.answer(proposal.experiments[b], proposal.tests[b]);
    outcomes.insert(outcomes.end(), answers.begin(), answers.end());
  }
  return close_round(pkg, proposal, outcomes, index);
}

RunRecord run(const Pkg& initial, const PlannerConfig& config, Oracle& oracle) {
  const std::size_t cap =
      config.max_rounds ? config.max_rounds : default_max_rounds(initial.size());
  RunRecord record;
  record.initial_ambiguity = ambiguity(initial);
  Pkg pkg = initial;
  while (ambiguity(pkg) > 0) {
    if (record.rounds.size() >= cap) {
      record.terminated = Termination::kRoundCap;
      record.final_pkg = pkg;
      throw RoundCapError("still " + std::to_string(ambiguity(pkg)) +
                              " ambiguous pairs after " + std::to_string(cap) + " rounds",
                          std::move(record));
    }
    auto [next, log] = run_round(pkg, config, oracle, record.rounds.size());
    for (const auto& x : log.experiments) record.total_manipulations += x.size();
    record.rounds.push_back(std::move(log));
    pkg = std::move(next);
  }
  record.terminated = Termination::kSuccess;
  record.final_pkg = std::move(pkg);
  return record;
}

RunRecord simulate(const Dag& truth, const PlannerConfig& config) {
  SimulatedOracle oracle(truth);
  return run(cpdag_of(truth), config, oracle);
}

namespace {

json sets_to_json(const std::vector<InterventionSet>& sets) {
  json out = json::array();
  for (const auto& x : sets) out.push_back(x.members());
  return out;
}

}  // namespace

namespace {

json weights_to_json(const std::map<UnorderedPair, double>& weights) {
  json out = json::array();
  for (const auto& [pair, w] : weights) out.push_back({pair.lo, pair.hi, w});
  return out;
}

std::map<UnorderedPair, double> weights_from_json(const json& doc) {
  std::map<UnorderedPair, double> out;
  for (const auto& item : doc) {
    out[{item.at(0).get<VertexId>(), item.at(1).get<VertexId>()}] = item.at(2).get<double>();
  }
  return out;
}

}  // namespace

json config_to_json(const PlannerConfig& config) {
  const auto& ip = config.ip;
  json batch = {{"count", ip.batch.count}, {"cap_pair_credit", ip.batch.cap_pair_credit}};
  if (!ip.batch.budgets.empty()) batch["budgets"] = ip.batch.budgets;
  if (ip.batch.total_budget) batch["total_budget"] = *ip.batch.total_budget;

  json objective = {{"kind", to_string(ip.objective.kind)}, {"lambda", ip.objective.lambda}};
  if (!ip.objective.unknown_weights.empty())
    objective["unknown_weights"] = weights_to_json(ip.objective.unknown_weights);
  if (!ip.objective.semidirected_weights.empty())
    objective["semidirected_weights"] = weights_to_json(ip.objective.semidirected_weights);
  if (!ip.objective.adjacent_weights.empty())
    objective["adjacent_weights"] = weights_to_json(ip.objective.adjacent_weights);
  if (!ip.objective.relevant.empty()) {
    json rel = json::array();
    for (const auto& p : ip.objective.relevant) rel.push_back({p.lo, p.hi});
    objective["relevant"] = rel;
  }

  json costs = json::object();
  if (!config.costs.intervention.empty()) costs["intervention"] = config.costs.intervention;
  if (!config.costs.observation.empty()) costs["observation"] = config.costs.observation;
  if (!config.costs.interactions.empty()) {
    json inter = json::array();
    for (const auto& i : config.costs.interactions)
      inter.push_back({{"members", i.members}, {"delta_cost", i.delta_cost}});
    costs["interactions"] = inter;
  }

  return {
      {"strategy", to_string(config.strategy)},
      {"k_max", ip.k_max},
      {"budget", ip.budget ? json(*ip.budget) : json(nullptr)},
      {"objective", objective},
      {"batch", batch},
      {"costs", costs},
      {"max_rounds", config.max_rounds},
      {"seed", config.seed},
  };
}

PlannerConfig config_from_json(const json& doc) {
  PlannerConfig config;
  if (doc.is_null()) return config;
  try {
    if (!doc.is_object()) throw ConfigError("config must be an object");
    if (doc.contains("strategy")) {
      auto s = parse_strategy(doc["strategy"].get<std::string>());
      if (!s) throw ConfigError("unknown strategy " + doc["strategy"].dump());
      config.strategy = *s;
    }
    config.ip.k_max = doc.value("k_max", config.ip.k_max);
    if (doc.contains("budget") && !doc["budget"].is_null())
      config.ip.budget = doc["budget"].get<double>();
    if (doc.contains("objective")) {
      const json& o = doc["objective"];
      auto& obj = config.ip.objective;
      if (o.is_string()) {
        auto kind = parse_objective_kind(o.get<std::string>());
        if (!kind) throw ConfigError("unknown objective " + o.dump());
        obj.kind = *kind;
      } else {
        if (o.contains("kind")) {
          auto kind = parse_objective_kind(o["kind"].get<std::string>());
          if (!kind) throw ConfigError("unknown objective " + o["kind"].dump());
          obj.kind = *kind;
        }
        obj.lambda = o.value("lambda", 0.0);
        if (o.contains("unknown_weights")) obj.unknown_weights = weights_from_json(o["unknown_weights"]);
        if (o.contains("semidirected_weights"))
          obj.semidirected_weights = weights_from_json(o["semidirected_weights"]);
        if (o.contains("adjacent_weights")) obj.adjacent_weights = weights_from_json(o["adjacent_weights"]);
        if (o.contains("relevant")) {
          for (const auto& p : o["relevant"])
            obj.relevant.insert({p.at(0).get<VertexId>(), p.at(1).get<VertexId>()});
        }
      }
    }
    if (doc.contains("lambda")) config.ip.objective.lambda = doc["lambda"].get<double>();
    if (doc.contains("batch")) {
      const json& b = doc["batch"];
      config.ip.batch.count = b.value("count", std::size_t{1});
      config.ip.batch.cap_pair_credit = b.value("cap_pair_credit", false);
      if (b.contains("budgets")) config.ip.batch.budgets = b["budgets"].get<std::vector<double>>();
      if (b.contains("total_budget") && !b["total_budget"].is_null())
        config.ip.batch.total_budget = b["total_budget"].get<double>();
    }
    if (doc.contains("costs")) {
      const json& c = doc["costs"];
      if (c.contains("intervention"))
        config.costs.intervention = c["intervention"].get<std::vector<double>>();
      if (c.contains("observation"))
        config.costs.observation = c["observation"].get<std::vector<double>>();
      if (c.contains("interactions")) {
        for (const auto& i : c["interactions"]) {
          config.costs.interactions.push_back(
              {i.at("members").get<std::vector<VertexId>>(), i.at("delta_cost").get<double>()});
        }
      }
    }
    config.max_rounds = doc.value("max_rounds", config.max_rounds);
    config.seed = doc.value("seed", config.seed);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("planner config: ") + e.what());
  }
  return config;
}

json round_to_json(const RoundLog& log) {
  json tests = json::array();
  for (const auto& t : log.tests) tests.push_back(t.id());
  json outcomes = json::array();
  for (const auto& o : log.outcomes) outcomes.push_back(outcome_to_json(o));
  json transitions = json::array();
  for (const auto& c : log.transitions) {
    json entry = {{"pair", {c.pair.lo, c.pair.hi}},
                  {"from", to_string(c.before)},
                  {"to", to_string(c.after)}};
    if (c.direction) entry["direction"] = {c.direction->from, c.direction->to};
    transitions.push_back(entry);
  }
  json meek = json::array();
  for (const auto& m : log.meek)
    meek.push_back({{"edge", {m.edge.from, m.edge.to}}, {"rule", to_string(m.rule)}});
  return {
      {"round", log.index},
      {"interventions", sets_to_json(log.experiments)},
      {"objective", log.objective},
      {"tests", tests},
      {"outcomes", outcomes},
      {"transitions", transitions},
      {"meek", meek},
      {"ambiguity_before", log.ambiguity_before},
      {"ambiguity_after", log.ambiguity_after},
  };
}

json run_to_json(const RunRecord& record, const PlannerConfig& config) {
  json rounds = json::array();
  for (const auto& r : record.rounds) rounds.push_back(round_to_json(r));
  return {
      {"config", config_to_json(config)},
      {"rounds", rounds},
      {"metrics",
       {{"rounds", record.round_count()},
        {"manipulations", record.total_manipulations},
        {"initial_ambiguity", record.initial_ambiguity},
        {"terminated", record.terminated == Termination::kSuccess ? "success" : "round-cap"}}},
      {"final_pkg", pkg_to_json(record.final_pkg)},
  };
}

}  // namespace causalip
