#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "causalip/dag.hpp"
#include "causalip/ip_model.hpp"
#include "causalip/planner.hpp"

namespace causalip {

struct ErdosRenyiGrid {
  std::vector<std::size_t> n;
  std::vector<double> p;
  std::size_t seeds = 50;
};

struct Fixture {
  std::string name;
  Dag dag;
};

struct GridSpec {
  std::optional<ErdosRenyiGrid> erdos_renyi;
  std::vector<Fixture> fixtures;
  std::size_t fixture_seeds = 50;
  std::vector<std::size_t> k_max{1};
  std::vector<Strategy> strategies{Strategy::kIp, Strategy::kRandom};
  ObjectiveSpec objective;
  std::optional<double> budget;
  std::size_t repetitions = 1;
  std::uint64_t master_seed = 0;
  std::size_t threads = 1;
};

// Reads the JSON grid file format; fixture paths are resolved against
// base_dir. Throws ConfigError.
GridSpec grid_from_json(const nlohmann::json& doc, const std::string& base_dir = ".");

struct ResultRow {
  std::size_t n = 0;
  std::string graph;  // p value for ER cells, fixture name otherwise
  std::size_t k_max = 1;
  Strategy strategy = Strategy::kIp;
  std::size_t seed = 0;
  std::size_t rep = 0;
  std::size_t rounds = 0;
  std::size_t manipulations = 0;
  Termination terminated = Termination::kSuccess;
  bool recovered = true;  // final Known/Absent equal the truth
};

struct ResultTable {
  std::vector<ResultRow> rows;
  bool with_rep_column = false;
  // Set when a run failed; rows then hold every run finished before it.
  std::optional<std::string> error;
};

// One row per (cell, seed, repetition, strategy). Both strategies of a pair
// share the truth graph and the run seed; output order and content depend
// only on the spec.
ResultTable run_grid(const GridSpec& spec);

std::string to_csv(const ResultTable& table);

struct Quantiles {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

// Linear-interpolation quantiles of a non-empty sample.
Quantiles quantiles(std::vector<double> values);

struct DeltaCell {
  std::size_t n = 0;
  std::string graph;
  std::size_t k_max = 1;
  std::size_t pairs = 0;
  std::vector<double> delta_rounds;     // random - ip, per pair
  std::vector<double> delta_variables;  // random - ip, per pair
  Quantiles rounds;
  Quantiles variables;
};

struct DeltaSummary {
  std::vector<DeltaCell> cells;
};

// Pairs ip and random rows on (cell, seed, rep). Throws UnpairedError when a
// row has no partner.
DeltaSummary summarize_delta(const ResultTable& table);

nlohmann::json summary_to_json(const DeltaSummary& summary);

}  // namespace causalip
