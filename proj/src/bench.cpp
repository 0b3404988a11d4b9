#include "causalip/bench.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "causalip/essential.hpp"
#include "causalip/generators.hpp"

namespace causalip {

using nlohmann::json;

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0;
  for (auto p : parts) h = splitmix(h ^ p);
  return h;
}

std::string format_p(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", p);
  return buf;
}

struct Job {
  const Dag* truth;
  ResultRow row;
  std::uint64_t run_seed;
};

}  // namespace

GridSpec grid_from_json(const json& doc, const std::string& base_dir) {
  GridSpec spec;
  try {
    if (doc.contains("erdos_renyi")) {
      const auto& er = doc["erdos_renyi"];
      ErdosRenyiGrid grid;
      grid.n = er.at("n").get<std::vector<std::size_t>>();
      grid.p = er.at("p").get<std::vector<double>>();
      grid.seeds = er.value("seeds", std::size_t{50});
      spec.erdos_renyi = grid;
    }
    if (doc.contains("fixtures")) {
      for (const auto& f : doc["fixtures"]) {
        std::filesystem::path path = f.at("path").get<std::string>();
        if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
        auto named = load_graph_file(path.string());
        spec.fixtures.push_back({f.value("name", path.stem().string()), named.dag});
      }
    }
    spec.fixture_seeds = doc.value("fixture_seeds", spec.fixture_seeds);
    if (doc.contains("k_max")) spec.k_max = doc["k_max"].get<std::vector<std::size_t>>();
    if (doc.contains("strategies")) {
      spec.strategies.clear();
      for (const auto& s : doc["strategies"]) {
        auto parsed = parse_strategy(s.get<std::string>());
        if (!parsed) throw ConfigError("unknown strategy " + s.dump());
        spec.strategies.push_back(*parsed);
      }
    }
    if (doc.contains("objective")) {
      auto kind = parse_objective_kind(doc["objective"].get<std::string>());
      if (!kind || *kind == ObjectiveKind::kWeighted || *kind == ObjectiveKind::kTargeted) {
        throw ConfigError("grid objective must be plain or cost-penalty");
      }
      spec.objective.kind = *kind;
    }
    spec.objective.lambda = doc.value("lambda", 0.0);
    if (doc.contains("budget") && !doc["budget"].is_null())
      spec.budget = doc["budget"].get<double>();
    spec.repetitions = doc.value("repetitions", spec.repetitions);
    spec.master_seed = doc.value("master_seed", spec.master_seed);
    spec.threads = doc.value("threads", spec.threads);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("grid file: ") + e.what());
  } catch (const ParseError& e) {
    throw ConfigError(std::string("grid fixture: ") + e.what());
  }
  if (spec.k_max.empty() || spec.strategies.empty() || spec.repetitions < 1 ||
      std::any_of(spec.k_max.begin(), spec.k_max.end(), [](auto k) { return k < 1; })) {
    throw ConfigError("grid needs k_max >= 1 values, strategies and repetitions >= 1");
  }
  return spec;
}

ResultTable run_grid(const GridSpec& spec) {
  // Truth graphs first, so every strategy in a pair sees the same one.
  std::vector<std::tuple<std::size_t, std::string, Dag, std::size_t, std::uint64_t>> graphs;
  if (spec.erdos_renyi) {
    for (std::size_t n : spec.erdos_renyi->n) {
      for (double p : spec.erdos_renyi->p) {
        for (std::size_t s = 0; s < spec.erdos_renyi->seeds; ++s) {
          std::uint64_t gseed = mix({spec.master_seed, n, std::bit_cast<std::uint64_t>(p), s});
          graphs.emplace_back(n, format_p(p), erdos_renyi_dag({n, p, gseed}), s, gseed);
        }
      }
    }
  }
  for (std::size_t f = 0; f < spec.fixtures.size(); ++f) {
    const auto& fx = spec.fixtures[f];
    for (std::size_t s = 0; s < spec.fixture_seeds; ++s) {
      graphs.emplace_back(fx.dag.size(), fx.name, fx.dag, s,
                          mix({spec.master_seed, 0xf1f1ULL, f, s}));
    }
  }

  std::vector<Job> jobs;
  for (const auto& [n, label, dag, s, gseed] : graphs) {
    for (std::size_t k : spec.k_max) {
      for (std::size_t rep = 0; rep < spec.repetitions; ++rep) {
        std::uint64_t run_seed = mix({gseed, k, rep});
        for (Strategy strategy : spec.strategies) {
          ResultRow row;
          row.n = n;
          row.graph = label;
          row.k_max = k;
          row.strategy = strategy;
          row.seed = s;
          row.rep = rep;
          jobs.push_back({&dag, row, run_seed});
        }
      }
    }
  }

  std::vector<std::optional<ResultRow>> done(jobs.size());
  std::vector<std::optional<std::string>> failures(jobs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};

  auto worker = [&] {
    for (;;) {
      std::size_t idx = next.fetch_add(1);
      if (idx >= jobs.size() || failed.load()) return;
      const Job& job = jobs[idx];
      ResultRow row = job.row;
      PlannerConfig config;
      config.strategy = row.strategy;
      config.ip.k_max = row.k_max;
      config.ip.budget = spec.budget;
      config.ip.objective = spec.objective;
      config.seed = job.run_seed;
      try {
        RunRecord record;
        try {
          record = simulate(*job.truth, config);
        } catch (const RoundCapError& e) {
          record = e.record();
        }
        row.rounds = record.round_count();
        row.manipulations = record.total_manipulations;
        row.terminated = record.terminated;
        row.recovered = record.final_pkg == fully_resolved(*job.truth);
        done[idx] = row;
      } catch (const std::exception& e) {
        failures[idx] = std::string(e.what());
        failed.store(true);
      }
    }
  };

  std::size_t threads = std::max<std::size_t>(1, spec.threads);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  ResultTable table;
  table.with_rep_column = spec.repetitions > 1;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (failures[i] && !table.error) {
      table.error = "run " + std::to_string(i) + " (" + jobs[i].row.graph + ", seed " +
                    std::to_string(jobs[i].row.seed) + "): " + *failures[i];
    }
    if (done[i]) table.rows.push_back(*done[i]);
  }
  return table;
}

std::string to_csv(const ResultTable& table) {
  std::ostringstream os;
  os << "N,p_or_fixture,k_max,strategy,seed";
  if (table.with_rep_column) os << ",rep";
  os << ",rounds,manipulations,terminated\n";
  for (const auto& r : table.rows) {
    os << r.n << "," << r.graph << "," << r.k_max << "," << to_string(r.strategy) << ","
       << r.seed;
    if (table.with_rep_column) os << "," << r.rep;
    os << "," << r.rounds << "," << r.manipulations << ","
       << (r.terminated == Termination::kSuccess ? "success" : "round-cap") << "\n";
  }
  return os.str();
}

Quantiles quantiles(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  auto at = [&](double q) {
    double pos = q * static_cast<double>(v.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    auto hi = static_cast<std::size_t>(std::ceil(pos));
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  return {v.front(), at(0.25), at(0.5), at(0.75), v.back()};
}

DeltaSummary summarize_delta(const ResultTable& table) {
  using CellKey = std::tuple<std::size_t, std::string, std::size_t>;
  using PairKey = std::tuple<std::size_t, std::size_t>;
  std::map<CellKey, std::map<PairKey, std::pair<const ResultRow*, const ResultRow*>>> cells;
  for (const auto& r : table.rows) {
    auto& slot = cells[{r.n, r.graph, r.k_max}][{r.seed, r.rep}];
    (r.strategy == Strategy::kIp ? slot.first : slot.second) = &r;
  }
  DeltaSummary summary;
  for (const auto& [key, pairs] : cells) {
    DeltaCell cell;
    std::tie(cell.n, cell.graph, cell.k_max) = key;
    for (const auto& [pk, pair] : pairs) {
      if (!pair.first || !pair.second) {
        throw UnpairedError("cell N=" + std::to_string(cell.n) + " " + cell.graph +
                            " k_max=" + std::to_string(cell.k_max) + " seed " +
                            std::to_string(std::get<0>(pk)) + " lacks a " +
                            (pair.first ? "random" : "ip") + " run");
      }
      cell.delta_rounds.push_back(static_cast<double>(pair.second->rounds) -
                                  static_cast<double>(pair.first->rounds));
      cell.delta_variables.push_back(static_cast<double>(pair.second->manipulations) -
                                     static_cast<double>(pair.first->manipulations));
    }
    cell.pairs = cell.delta_rounds.size();
    cell.rounds = quantiles(cell.delta_rounds);
    cell.variables = quantiles(cell.delta_variables);
    summary.cells.push_back(std::move(cell));
  }
  return summary;
}

json summary_to_json(const DeltaSummary& summary) {
  auto q = [](const Quantiles& x) {
    return json{{"min", x.min}, {"q1", x.q1}, {"median", x.median}, {"q3", x.q3}, {"max", x.max}};
  };
  json cells = json::array();
  for (const auto& c : summary.cells) {
    cells.push_back({{"N", c.n},
                     {"p_or_fixture", c.graph},
                     {"k_max", c.k_max},
                     {"pairs", c.pairs},
                     {"delta_rounds", q(c.rounds)},
                     {"delta_variables", q(c.variables)}});
  }
  return {{"cells", cells}};
}

}  // namespace causalip
