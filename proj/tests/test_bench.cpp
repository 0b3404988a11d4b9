#include "doctest.h"

#include "causalip/bench.hpp"
#include "causalip/errors.hpp"
#include "causalip/generators.hpp"

using namespace causalip;

namespace {

GridSpec er_grid(std::vector<std::size_t> n, std::vector<double> p, std::size_t seeds) {
  GridSpec g;
  g.erdos_renyi = ErdosRenyiGrid{std::move(n), std::move(p), seeds};
  return g;
}

ResultRow row(Strategy s, std::size_t seed, std::size_t rounds, std::size_t manips) {
  ResultRow r;
  r.n = 4;
  r.graph = "0.5";
  r.strategy = s;
  r.seed = seed;
  r.rounds = rounds;
  r.manipulations = manips;
  return r;
}

}  // namespace

TEST_CASE("tiny grid") {
  auto spec = er_grid({3}, {1.0}, 5);
  auto table = run_grid(spec);
  CHECK_FALSE(table.error);
  REQUIRE(table.rows.size() == 10);
  for (const auto& r : table.rows) {
    CHECK(r.terminated == Termination::kSuccess);
    CHECK(r.recovered);
  }
  auto csv = to_csv(table);
  CHECK(csv.rfind("N,p_or_fixture,k_max,strategy,seed,rounds,manipulations,terminated\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);

  auto two = run_grid(er_grid({3, 4}, {0.5, 1.0}, 3));
  CHECK(two.rows.size() == 2 * 2 * 3 * 2);
}

TEST_CASE("ER cell N=8 p=0.5: every IP run recovers the truth") {
  auto spec = er_grid({8}, {0.5}, 50);
  spec.strategies = {Strategy::kIp};
  auto table = run_grid(spec);
  REQUIRE(table.rows.size() == 50);
  for (const auto& r : table.rows) {
    CHECK(r.terminated == Termination::kSuccess);
    CHECK(r.recovered);
  }
}

TEST_CASE("asia fixture: both strategies recover") {
  GridSpec spec;
  spec.fixtures.push_back(
      {"asia", load_graph_file(std::string(CAUSALIP_DATA_DIR) + "/networks/asia.edges").dag});
  spec.fixture_seeds = 10;
  auto table = run_grid(spec);
  REQUIRE(table.rows.size() == 20);
  for (const auto& r : table.rows) {
    CHECK(r.graph == "asia");
    CHECK(r.n == 8);
    CHECK(r.recovered);
  }
}

TEST_CASE("determinism across thread counts") {
  auto spec = er_grid({6, 9}, {0.2, 0.6}, 8);
  spec.k_max = {1, 3};
  spec.master_seed = 12345;
  auto one = to_csv(run_grid(spec));
  spec.threads = 4;
  CHECK(to_csv(run_grid(spec)) == one);
  spec.master_seed = 54321;
  CHECK(to_csv(run_grid(spec)) != one);
}

TEST_CASE("repetitions add a rep column") {
  auto spec = er_grid({5}, {0.5}, 2);
  spec.repetitions = 3;
  auto table = run_grid(spec);
  CHECK(table.rows.size() == 2 * 3 * 2);
  CHECK(to_csv(table).find(",seed,rep,") != std::string::npos);
  CHECK(summarize_delta(table).cells.at(0).pairs == 6);
}

TEST_CASE("a failing run keeps the rows finished before it") {
  auto spec = er_grid({6}, {0.5}, 4);
  spec.strategies = {Strategy::kRandom, Strategy::kIp};
  spec.budget = -1;  // infeasible for the IP
  auto table = run_grid(spec);
  REQUIRE(table.error);
  bool names_cause = table.error->find("budget") != std::string::npos;
  CHECK(names_cause);
  CHECK(table.rows.size() < 8);
  CHECK_FALSE(table.rows.empty());
}

TEST_CASE("summarize_delta") {
  ResultTable t;
  t.rows = {row(Strategy::kIp, 0, 3, 3), row(Strategy::kRandom, 0, 3, 4),
            row(Strategy::kIp, 1, 3, 3), row(Strategy::kRandom, 1, 5, 5)};
  auto s = summarize_delta(t);
  REQUIRE(s.cells.size() == 1);
  CHECK(s.cells[0].delta_rounds == std::vector<double>{0, 2});
  CHECK(s.cells[0].delta_variables == std::vector<double>{1, 2});
  CHECK(s.cells[0].rounds.median == 1);
  auto doc = summary_to_json(s);
  CHECK(doc["cells"][0]["delta_rounds"]["median"] == 1.0);

  t.rows.push_back(row(Strategy::kIp, 2, 1, 1));
  CHECK_THROWS_AS(summarize_delta(t), UnpairedError);
}

TEST_CASE("quantiles interpolate linearly") {
  auto q = quantiles({4, 1, 3, 2});
  CHECK(q.min == 1);
  CHECK(q.max == 4);
  CHECK(q.median == doctest::Approx(2.5));
  CHECK(q.q1 == doctest::Approx(1.75));
  CHECK(q.q3 == doctest::Approx(3.25));
  CHECK(quantiles({7}).median == 7);
}

TEST_CASE("grid files") {
  using nlohmann::json;
  auto spec = grid_from_json(json::parse(R"({
    "erdos_renyi": {"n": [3, 4], "p": [0.5], "seeds": 3},
    "fixtures": [{"name": "chain", "path": "networks/chain.edges"}],
    "fixture_seeds": 2,
    "k_max": [1, 2],
    "strategies": ["ip", "random"],
    "master_seed": 9,
    "threads": 2
  })"), CAUSALIP_DATA_DIR);
  CHECK(spec.erdos_renyi->n == std::vector<std::size_t>{3, 4});
  CHECK(spec.fixtures.at(0).name == "chain");
  CHECK(spec.k_max.size() == 2);
  CHECK(spec.master_seed == 9);
  CHECK(run_grid(spec).rows.size() == (2 * 3 + 2) * 2 * 2);

  CHECK_THROWS_AS(grid_from_json(json{{"strategies", {"greedy"}}}), ConfigError);
  CHECK_THROWS_AS(grid_from_json(json{{"k_max", {0}}}), ConfigError);
  CHECK_THROWS_AS(grid_from_json(json{{"objective", "weighted"}}), ConfigError);
}
