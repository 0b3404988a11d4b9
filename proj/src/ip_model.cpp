#include "causalip/ip_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cctype>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "causalip/errors.hpp"

namespace causalip {

std::string_view to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::kPlain: return "plain";
    case ObjectiveKind::kWeighted: return "weighted";
    case ObjectiveKind::kTargeted: return "targeted";
    case ObjectiveKind::kCostPenalty: return "cost-penalty";
  }
  return "?";
}

std::optional<ObjectiveKind> parse_objective_kind(std::string_view name) {
  for (auto kind : {ObjectiveKind::kPlain, ObjectiveKind::kWeighted,
                    ObjectiveKind::kTargeted, ObjectiveKind::kCostPenalty}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

double ObjectiveSpec::weight(EdgeClass cls, UnorderedPair pair) const {
  switch (kind) {
    case ObjectiveKind::kPlain:
      return 1.0;
    case ObjectiveKind::kTargeted:
      return relevant.count(pair) ? 1.0 : 0.0;
    case ObjectiveKind::kWeighted:
    case ObjectiveKind::kCostPenalty: {
      const std::map<UnorderedPair, double>* table = nullptr;
      if (cls == EdgeClass::kUnknown) table = &unknown_weights;
      if (cls == EdgeClass::kSemiDirected) table = &semidirected_weights;
      if (cls == EdgeClass::kAdjacent) table = &adjacent_weights;
      if (table == nullptr) return 0.0;
      auto it = table->find(pair);
      return it == table->end() ? 1.0 : it->second;
    }
  }
  return 0.0;
}

std::size_t IpInstance::idu_count() const {
  return std::count_if(edges.begin(), edges.end(),
                       [](const auto& e) { return e.cls == EdgeClass::kUnknown; });
}
std::size_t IpInstance::ids_count() const {
  return std::count_if(edges.begin(), edges.end(), [](const auto& e) {
    return e.cls == EdgeClass::kSemiDirected;
  });
}
std::size_t IpInstance::ida_count() const {
  return std::count_if(edges.begin(), edges.end(),
                       [](const auto& e) { return e.cls == EdgeClass::kAdjacent; });
}

bool IpInstance::is_viable(VertexId v) const {
  return std::binary_search(viable.begin(), viable.end(), v);
}

std::optional<double> IpInstance::experiment_budget(std::size_t batch) const {
  if (!config.batch.budgets.empty()) return config.batch.budgets[batch];
  return config.budget;
}

namespace {

void validate(std::size_t n, const CostModel& costs, const IpConfig& config) {
  if (config.k_max < 1) throw ConfigError("k_max must be at least 1");
  if (config.batch.count < 1) throw ConfigError("batch count must be at least 1");
  if (!config.batch.budgets.empty() &&
      config.batch.budgets.size() != config.batch.count) {
    throw ConfigError("one budget per batch experiment is required");
  }
  const auto& obj = config.objective;
  if (obj.lambda < 0 || !std::isfinite(obj.lambda)) {
    throw ConfigError("lambda must be a finite non-negative number");
  }
  for (const auto* table :
       {&obj.unknown_weights, &obj.semidirected_weights, &obj.adjacent_weights}) {
    for (const auto& [pair, w] : *table) {
      if (w < 0 || !std::isfinite(w)) throw ConfigError("edge weights must be non-negative");
      if (pair.hi >= n || pair.lo == pair.hi) throw ConfigError("weighted pair out of range");
    }
  }
  for (const auto& pair : obj.relevant) {
    if (pair.hi >= n || pair.lo == pair.hi) throw ConfigError("relevant pair out of range");
  }
  for (const auto* v : {&costs.intervention, &costs.observation}) {
    if (!v->empty() && v->size() != n) {
      throw ConfigError("cost vectors need one entry per vertex");
    }
    for (double c : *v)
      if (c < 0 || !std::isfinite(c)) throw ConfigError("costs must be non-negative");
  }
  std::set<std::vector<VertexId>> subsets;
  for (const auto& inter : costs.interactions) {
    auto members = inter.members;
    std::sort(members.begin(), members.end());
    if (std::adjacent_find(members.begin(), members.end()) != members.end() ||
        members.size() < 2) {
      throw ConfigError("interaction subsets need at least two distinct vertices");
    }
    if (members.back() >= n) throw ConfigError("interaction vertex out of range");
    if (!std::isfinite(inter.delta_cost)) throw ConfigError("interaction cost must be finite");
    if (!subsets.insert(members).second) throw ConfigError("duplicate interaction subset");
  }
}

}  // namespace

IpInstance build_instance(const Pkg& pkg, const CostModel& costs, const IpConfig& config) {
  validate(pkg.size(), costs, config);
  IpInstance inst;
  inst.n = pkg.size();
  inst.viable = viable_vertices(pkg);
  inst.costs = costs;
  inst.config = config;
  for (auto& inter : inst.costs.interactions)
    std::sort(inter.members.begin(), inter.members.end());

  const auto n = static_cast<VertexId>(pkg.size());
  for (VertexId i = 0; i < n; ++i) {
    for (VertexId j = i + 1; j < n; ++j) {
      EdgeClass cls = pkg.edge_class(i, j);
      double w = config.objective.weight(cls, {i, j});
      switch (cls) {
        case EdgeClass::kUnknown:
          inst.edges.push_back({cls, i, j, w});
          inst.orientation_vars.push_back({i, j});
          inst.orientation_vars.push_back({j, i});
          inst.adjacency_vars.emplace_back(i, j);
          break;
        case EdgeClass::kAdjacent:
          inst.edges.push_back({cls, i, j, w});
          inst.orientation_vars.push_back({i, j});
          inst.orientation_vars.push_back({j, i});
          break;
        case EdgeClass::kSemiDirected: {
          auto d = *pkg.direction(i, j);
          inst.edges.push_back({cls, d.from, d.to, w});
          inst.orientation_vars.push_back(d);
          inst.adjacency_vars.emplace_back(i, j);
          break;
        }
        default:
          break;
      }
    }
  }
  return inst;
}

double intervention_cost_of(const InterventionSet& x, const CostModel& costs) {
  double total = 0.0;
  for (VertexId v : x.members()) total += costs.intervention_cost(v);
  for (const auto& inter : costs.interactions) {
    if (std::all_of(inter.members.begin(), inter.members.end(),
                    [&](VertexId v) { return x.contains(v); })) {
      total += inter.delta_cost;
    }
  }
  return total;
}

double cost_of(const InterventionSet& x, const CostModel& costs,
               std::span<const VertexId> viable) {
  double total = intervention_cost_of(x, costs);
  for (VertexId v : viable)
    if (!x.contains(v)) total += costs.observation_cost(v);
  return total;
}

std::optional<Test> enabled_test(const UncertainEdge& e, const InterventionSet& x) {
  const bool from_in = x.contains(e.from);
  const bool to_in = x.contains(e.to);
  switch (e.cls) {
    case EdgeClass::kUnknown:
      if (from_in && !to_in) return Test::orientation(e.from, e.to);
      if (to_in && !from_in) return Test::orientation(e.to, e.from);
      if (!from_in && !to_in) return Test::adjacency(e.from, e.to);
      return std::nullopt;
    case EdgeClass::kSemiDirected:
      if (to_in) return std::nullopt;
      if (from_in) return Test::orientation(e.from, e.to);
      return Test::adjacency(e.from, e.to);
    case EdgeClass::kAdjacent:
      if (from_in && !to_in) return Test::orientation(e.from, e.to);
      if (to_in && !from_in) return Test::orientation(e.to, e.from);
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

std::vector<Test> enabled_tests(const IpInstance& instance, const InterventionSet& x) {
  std::vector<Test> tests;
  for (const auto& e : instance.edges)
    if (auto t = enabled_test(e, x)) tests.push_back(*t);
  return tests;
}

std::vector<EdgeCredit> credit_breakdown(const IpInstance& instance,
                                         const InterventionSet& x) {
  std::vector<EdgeCredit> out;
  for (const auto& e : instance.edges) {
    auto t = enabled_test(e, x);
    out.push_back({e, t, t ? e.weight : 0.0});
  }
  return out;
}

double gain(const IpInstance& instance, std::span<const InterventionSet> batches) {
  double total = 0.0;
  if (instance.config.batch.cap_pair_credit) {
    for (const auto& e : instance.edges) {
      bool credited = std::any_of(batches.begin(), batches.end(), [&](const auto& x) {
        return enabled_test(e, x).has_value();
      });
      if (credited) total += e.weight;
    }
  } else {
    for (const auto& x : batches)
      for (const auto& e : instance.edges)
        if (enabled_test(e, x)) total += e.weight;
  }
  const auto& obj = instance.config.objective;
  if (obj.kind == ObjectiveKind::kCostPenalty) {
    for (const auto& x : batches)
      total -= obj.lambda * cost_of(x, instance.costs, instance.viable);
  }
  return total;
}

double gain(const Pkg& pkg, const InterventionSet& x, const ObjectiveSpec& objective,
            const CostModel& costs) {
  IpConfig config;
  config.objective = objective;
  auto instance = build_instance(pkg, costs, config);
  return gain(instance, std::span<const InterventionSet>(&x, 1));
}

bool feasible(const IpInstance& instance, std::span<const InterventionSet> batches) {
  const auto& cfg = instance.config;
  if (batches.size() != cfg.batch.count) return false;
  std::vector<char> used(instance.n, 0);
  double total_intervention = 0.0;
  for (std::size_t b = 0; b < batches.size(); ++b) {
    const auto& x = batches[b];
    if (x.size() > cfg.k_max) return false;
    for (VertexId v : x.members()) {
      if (!instance.is_viable(v) || used[v]) return false;
      used[v] = 1;
    }
    if (auto budget = instance.experiment_budget(b)) {
      if (cost_of(x, instance.costs, instance.viable) > *budget + kFeasibilityTolerance)
        return false;
    }
    total_intervention += intervention_cost_of(x, instance.costs);
  }
  if (cfg.batch.total_budget &&
      total_intervention > *cfg.batch.total_budget + kFeasibilityTolerance) {
    return false;
  }
  return true;
}

namespace {

constexpr int kUndecided = -1;

class BranchAndBound {
 public:
  BranchAndBound(const IpInstance& inst, std::mt19937_64& rng)
      : inst_(inst),
        rng_(rng),
        batches_(inst.config.batch.count),
        label_(inst.n, kUndecided),
        used_(batches_, 0),
        exhaustive_(inst.viable.size() <= inst.config.exhaustive_tie_threshold) {
    std::vector<double> incident(inst.n, 0.0);
    for (const auto& e : inst.edges) {
      incident[e.from] += e.weight;
      incident[e.to] += e.weight;
    }
    order_ = inst.viable;
    std::shuffle(order_.begin(), order_.end(), rng_);
    std::stable_sort(order_.begin(), order_.end(), [&](VertexId a, VertexId b) {
      return incident[a] > incident[b];
    });
    // Interactions over non-viable vertices can never activate.
    for (const auto& inter : inst.costs.interactions) {
      if (std::all_of(inter.members.begin(), inter.members.end(),
                      [&](VertexId v) { return inst.is_viable(v); }))
        live_interactions_.push_back(&inter);
    }
  }

  IpSolution run() {
    search(0);
    if (!found_) throw InfeasibleError("no intervention set satisfies the budget");
    IpSolution sol;
    if (exhaustive_) {
      std::uniform_int_distribution<std::size_t> pick(0, optima_.size() - 1);
      sol.batches = optima_[pick(rng_)];
    } else {
      sol.batches = chosen_;
    }
    sol.objective = gain(inst_, sol.batches);
    for (const auto& x : sol.batches) sol.tests.push_back(enabled_tests(inst_, x));
    std::sort(optima_.begin(), optima_.end());
    sol.optima = std::move(optima_);
    sol.optima_complete = exhaustive_;
    sol.nodes = nodes_;
    return sol;
  }

 private:
  enum class Side { kIn, kOut, kUndecided };

  Side side(VertexId v, std::size_t b) const {
    int l = label_[v];
    if (l == kUndecided) return used_[b] < inst_.config.k_max ? Side::kUndecided : Side::kOut;
    return l == static_cast<int>(b) ? Side::kIn : Side::kOut;
  }

  // Upper bound on the objective over completions of the current partial
  // assignment, or nullopt when no completion can meet the budgets.
  std::optional<double> bound() const {
    const auto& cfg = inst_.config;
    double credit = 0.0;
    double cost_penalty = 0.0;
    double total_intervention = 0.0;

    if (cfg.batch.cap_pair_credit) {
      for (const auto& e : inst_.edges) {
        for (std::size_t b = 0; b < batches_; ++b) {
          if (!ruled_out(e, b)) {
            credit += e.weight;
            break;
          }
        }
      }
    }

    std::vector<double> need(inst_.n, 0.0);
    for (std::size_t b = 0; b < batches_; ++b) {
      if (!cfg.batch.cap_pair_credit) credit += batch_credit_bound(b, need);

      double lb = 0.0;
      double intervention_lb = 0.0;
      for (VertexId v : inst_.viable) {
        double ci = inst_.costs.intervention_cost(v);
        double co = inst_.costs.observation_cost(v);
        switch (side(v, b)) {
          case Side::kIn: lb += ci; intervention_lb += ci; break;
          case Side::kOut: lb += co; break;
          case Side::kUndecided: lb += std::min(ci, co); break;
        }
      }
      for (const auto* inter : live_interactions_) {
        bool all_in = true;
        bool possible = true;
        for (VertexId v : inter->members) {
          Side s = side(v, b);
          if (s != Side::kIn) all_in = false;
          if (s == Side::kOut) possible = false;
        }
        double term = all_in ? inter->delta_cost
                              : (possible ? std::min(0.0, inter->delta_cost) : 0.0);
        lb += term;
        intervention_lb += term;
      }
      if (auto budget = inst_.experiment_budget(b); budget && lb > *budget + kFeasibilityTolerance)
        return std::nullopt;
      cost_penalty += lb;
      total_intervention += intervention_lb;
    }
    if (cfg.batch.total_budget &&
        total_intervention > *cfg.batch.total_budget + kFeasibilityTolerance) {
      return std::nullopt;
    }
    if (cfg.objective.kind == ObjectiveKind::kCostPenalty)
      credit -= cfg.objective.lambda * cost_penalty;
    return credit;
  }

  bool ruled_out(const UncertainEdge& e, std::size_t b) const {
    Side f = side(e.from, b);
    Side t = side(e.to, b);
    switch (e.cls) {
      case EdgeClass::kUnknown: return f == Side::kIn && t == Side::kIn;
      case EdgeClass::kSemiDirected: return t == Side::kIn;
      case EdgeClass::kAdjacent:
        return (f == Side::kIn && t == Side::kIn) || (f == Side::kOut && t == Side::kOut);
      default: return true;
    }
  }

  // Credit still reachable in experiment b. Adjacent pairs with no endpoint
  // in b yet need a further selection; at most k_max - used such selections
  // remain, so that part is capped by the largest per-vertex needs.
  double batch_credit_bound(std::size_t b, std::vector<double>& need) const {
    double free = 0.0;
    double need_total = 0.0;
    std::fill(need.begin(), need.end(), 0.0);
    for (const auto& e : inst_.edges) {
      if (e.weight == 0.0 || ruled_out(e, b)) continue;
      if (e.cls != EdgeClass::kAdjacent) {
        free += e.weight;
        continue;
      }
      Side f = side(e.from, b);
      Side t = side(e.to, b);
      if (f == Side::kIn || t == Side::kIn) {
        free += e.weight;
        continue;
      }
      need_total += e.weight;
      if (f == Side::kUndecided) need[e.from] += e.weight;
      if (t == Side::kUndecided) need[e.to] += e.weight;
    }
    if (need_total == 0.0) return free;
    std::size_t slots = inst_.config.k_max - used_[b];
    std::vector<double> candidates;
    for (VertexId v : inst_.viable)
      if (need[v] > 0.0) candidates.push_back(need[v]);
    std::size_t take = std::min(slots, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + take, candidates.end(),
                      std::greater<>());
    double best = std::accumulate(candidates.begin(), candidates.begin() + take, 0.0);
    return free + std::min(need_total, best);
  }

  bool all_full() const {
    return std::all_of(used_.begin(), used_.end(),
                       [&](std::size_t u) { return u >= inst_.config.k_max; });
  }

  void search(std::size_t depth) {
    ++nodes_;
    if (depth == order_.size() || all_full()) {
      leaf();
      return;
    }
    auto ub = bound();
    if (!ub) return;
    if (found_) {
      if (exhaustive_ ? *ub < best_ - kFeasibilityTolerance
                      : *ub <= best_ + kFeasibilityTolerance)
        return;
    }
    VertexId v = order_[depth];
    for (std::size_t b = 0; b < batches_; ++b) {
      if (used_[b] >= inst_.config.k_max) continue;
      label_[v] = static_cast<int>(b);
      ++used_[b];
      search(depth + 1);
      --used_[b];
    }
    label_[v] = static_cast<int>(batches_);  // not intervened
    search(depth + 1);
    label_[v] = kUndecided;
  }

  void leaf() {
    std::vector<std::vector<VertexId>> members(batches_);
    for (VertexId v : inst_.viable) {
      int l = label_[v];
      if (l != kUndecided && l < static_cast<int>(batches_)) members[l].push_back(v);
    }
    std::vector<InterventionSet> sets;
    for (auto& m : members) sets.emplace_back(std::move(m));
    if (!feasible(inst_, sets)) return;
    double value = gain(inst_, sets);
    if (!found_ || value > best_ + kFeasibilityTolerance) {
      found_ = true;
      best_ = value;
      optima_.clear();
      optima_.push_back(sets);
      chosen_ = sets;
      ties_ = 1;
    } else if (value >= best_ - kFeasibilityTolerance) {
      optima_.push_back(sets);
      ++ties_;
      std::uniform_int_distribution<std::size_t> pick(0, ties_ - 1);
      if (!exhaustive_ && pick(rng_) == 0) chosen_ = sets;
    }
  }

  const IpInstance& inst_;
  std::mt19937_64& rng_;
  std::size_t batches_;
  std::vector<VertexId> order_;
  std::vector<int> label_;
  std::vector<std::size_t> used_;
  std::vector<const Interaction*> live_interactions_;
  bool exhaustive_;

  bool found_ = false;
  double best_ = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<InterventionSet>> optima_;
  std::vector<InterventionSet> chosen_;
  std::size_t ties_ = 0;
  std::size_t nodes_ = 0;
};

}  // namespace

IpSolution solve(const IpInstance& instance, std::mt19937_64& rng) {
  return BranchAndBound(instance, rng).run();
}

IpSolution solve_bruteforce(const IpInstance& instance, std::size_t viable_limit) {
  if (instance.config.batch.count != 1) {
    throw ConfigError("the reference solver handles single-experiment rounds only");
  }
  const std::size_t m = instance.viable.size();
  if (m > viable_limit) {
    throw TooLargeError(std::to_string(m) + " viable vertices exceed limit " +
                        std::to_string(viable_limit));
  }
  IpSolution sol;
  bool found = false;
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    ++sol.nodes;
    if (static_cast<std::size_t>(std::popcount(mask)) > instance.config.k_max) continue;
    std::vector<VertexId> members;
    for (std::size_t k = 0; k < m; ++k)
      if (mask >> k & 1) members.push_back(instance.viable[k]);
    std::vector<InterventionSet> sets{InterventionSet(std::move(members))};
    if (!feasible(instance, sets)) continue;
    double value = gain(instance, sets);
    if (!found || value > best + kFeasibilityTolerance) {
      found = true;
      best = value;
      sol.optima.clear();
      sol.optima.push_back(sets);
    } else if (value >= best - kFeasibilityTolerance) {
      sol.optima.push_back(sets);
    }
  }
  if (!found) throw InfeasibleError("no intervention set satisfies the budget");
  std::sort(sol.optima.begin(), sol.optima.end());
  sol.batches = sol.optima.front();
  sol.objective = gain(instance, sol.batches);
  sol.tests.push_back(enabled_tests(instance, sol.batches.front()));
  sol.optima_complete = true;
  return sol;
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void term(std::ostream& os, double coef, const std::string& var, bool& first) {
  if (coef == 0.0) return;
  if (coef < 0) {
    os << " - ";
  } else if (!first) {
    os << " + ";
  } else {
    os << " ";
  }
  os << num(std::abs(coef)) << " " << var;
  first = false;
}

}  // namespace

std::string to_lp(const IpInstance& inst) {
  const auto& cfg = inst.config;
  const std::size_t batches = cfg.batch.count;
  auto sfx = [&](std::size_t b) {
    return batches == 1 ? std::string() : "_b" + std::to_string(b);
  };
  auto pair_name = [](VertexId a, VertexId b) {
    return std::to_string(a) + "_" + std::to_string(b);
  };
  auto id_name = [&](const UncertainEdge& e, std::size_t b) {
    std::string prefix = e.cls == EdgeClass::kUnknown        ? "IDU_"
                         : e.cls == EdgeClass::kSemiDirected ? "IDS_"
                                                             : "IDA_";
    return prefix + pair_name(e.from, e.to) + sfx(b);
  };
  const bool penalty = cfg.objective.kind == ObjectiveKind::kCostPenalty;

  std::ostringstream os;
  os << "\\ adaptive intervention selection, objective " << to_string(cfg.objective.kind)
     << "\n";
  if (penalty) {
    double constant = 0.0;
    for (VertexId v : inst.viable) constant += inst.costs.observation_cost(v);
    os << "\\ objective omits the constant " << num(-cfg.objective.lambda * constant * batches)
       << "\n";
  }
  os << "Maximize\n obj:";
  bool first = true;
  for (std::size_t b = 0; b < batches; ++b) {
    for (const auto& e : inst.edges) term(os, e.weight, id_name(e, b), first);
    if (penalty) {
      for (VertexId v : inst.viable) {
        double delta = inst.costs.intervention_cost(v) - inst.costs.observation_cost(v);
        term(os, -cfg.objective.lambda * delta, "X_" + std::to_string(v) + sfx(b), first);
      }
      for (std::size_t s = 0; s < inst.costs.interactions.size(); ++s)
        term(os, -cfg.objective.lambda * inst.costs.interactions[s].delta_cost,
             "Y_" + std::to_string(s) + sfx(b), first);
    }
  }
  os << "\nSubject To\n";

  for (std::size_t b = 0; b < batches; ++b) {
    const std::string s = sfx(b);
    if (auto budget = inst.experiment_budget(b); budget && !inst.viable.empty()) {
      double constant = 0.0;
      os << " budget" << s << ":";
      bool f = true;
      for (VertexId v : inst.viable) {
        constant += inst.costs.observation_cost(v);
        term(os, inst.costs.intervention_cost(v) - inst.costs.observation_cost(v),
             "X_" + std::to_string(v) + s, f);
      }
      for (std::size_t k = 0; k < inst.costs.interactions.size(); ++k)
        term(os, inst.costs.interactions[k].delta_cost, "Y_" + std::to_string(k) + s, f);
      if (f) os << " 0 X_" << inst.viable.front() << s;
      os << " <= " << num(*budget - constant) << "\n";
    }
    if (!inst.viable.empty()) {
      os << " kmax" << s << ":";
      bool f = true;
      for (VertexId v : inst.viable) term(os, 1.0, "X_" + std::to_string(v) + s, f);
      os << " <= " << cfg.k_max << "\n";
    }
    for (const auto& o : inst.orientation_vars) {
      const std::string name = "O_" + pair_name(o.from, o.to) + s;
      os << " o1_" << pair_name(o.from, o.to) << s << ": " << name << " - X_" << o.from
         << s << " <= 0\n";
      os << " o2_" << pair_name(o.from, o.to) << s << ": " << name << " + X_" << o.to
         << s << " <= 1\n";
    }
    for (const auto& a : inst.adjacency_vars) {
      const std::string name = "A_" + pair_name(a.lo, a.hi) + s;
      os << " a1_" << pair_name(a.lo, a.hi) << s << ": " << name << " + X_" << a.lo << s
         << " <= 1\n";
      os << " a2_" << pair_name(a.lo, a.hi) << s << ": " << name << " + X_" << a.hi << s
         << " <= 1\n";
    }
    for (const auto& e : inst.edges) {
      const std::string id = id_name(e, b);
      const std::string fw = "O_" + pair_name(e.from, e.to) + s;
      const std::string bw = "O_" + pair_name(e.to, e.from) + s;
      const std::string adj = "A_" + pair_name(e.from, e.to) + s;
      std::string row = id;
      for (auto& c : row) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      os << " " << row << ": " << id;
      if (e.cls == EdgeClass::kUnknown) os << " - " << fw << " - " << bw << " - " << adj;
      if (e.cls == EdgeClass::kSemiDirected) os << " - " << fw << " - " << adj;
      if (e.cls == EdgeClass::kAdjacent) os << " - " << fw << " - " << bw;
      os << " <= 0\n";
    }
    for (std::size_t k = 0; k < inst.costs.interactions.size(); ++k) {
      const auto& inter = inst.costs.interactions[k];
      const std::string y = "Y_" + std::to_string(k) + s;
      for (VertexId v : inter.members)
        os << " y" << k << "_le_" << v << s << ": " << y << " - X_" << v << s << " <= 0\n";
      os << " y" << k << "_all" << s << ": " << y;
      for (VertexId v : inter.members) os << " - X_" << v << s;
      os << " >= " << -static_cast<double>(inter.members.size() - 1) << "\n";
    }
  }
  if (batches > 1) {
    for (VertexId v : inst.viable) {
      os << " disjoint_" << v << ":";
      bool f = true;
      for (std::size_t b = 0; b < batches; ++b)
        term(os, 1.0, "X_" + std::to_string(v) + sfx(b), f);
      os << " <= 1\n";
    }
    if (cfg.batch.total_budget && !inst.viable.empty()) {
      os << " total_budget:";
      bool f = true;
      for (std::size_t b = 0; b < batches; ++b) {
        for (VertexId v : inst.viable)
          term(os, inst.costs.intervention_cost(v), "X_" + std::to_string(v) + sfx(b), f);
        for (std::size_t k = 0; k < inst.costs.interactions.size(); ++k)
          term(os, inst.costs.interactions[k].delta_cost, "Y_" + std::to_string(k) + sfx(b), f);
      }
      os << " <= " << num(*cfg.batch.total_budget) << "\n";
    }
  }

  os << "Binary\n";
  for (std::size_t b = 0; b < batches; ++b) {
    const std::string s = sfx(b);
    for (VertexId v : inst.viable) os << " X_" << v << s << "\n";
    for (const auto& o : inst.orientation_vars) os << " O_" << pair_name(o.from, o.to) << s << "\n";
    for (const auto& a : inst.adjacency_vars) os << " A_" << pair_name(a.lo, a.hi) << s << "\n";
    for (const auto& e : inst.edges) os << " " << id_name(e, b) << "\n";
    for (std::size_t k = 0; k < inst.costs.interactions.size(); ++k)
      os << " Y_" << k << s << "\n";
  }
  os << "End\n";
  return os.str();
}

}  // namespace causalip
