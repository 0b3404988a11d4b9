#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "httplib.h"
#include "json.hpp"

#include "causalip/bench.hpp"
#include "causalip/errors.hpp"
#include "causalip/generators.hpp"
#include "causalip/http_api.hpp"
#include "causalip/ip_model.hpp"
#include "causalip/planner.hpp"
#include "causalip/serialization.hpp"
#include "causalip/service.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace causalip;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

// Flags shared by simulate and dump-ip.
struct PlanFlags {
  std::string strategy = "ip";
  std::size_t k_max = 1;
  std::string objective = "plain";
  double lambda = 0.0;
  std::optional<double> budget;
  std::string config_path;
  std::uint64_t seed = 0;

  void add(CLI::App* app, bool with_strategy) {
    if (with_strategy)
      app->add_option("--strategy", strategy, "ip or random")
          ->check(CLI::IsMember({"ip", "random"}))
          ->capture_default_str();
    app->add_option("--kmax", k_max, "Vertices per experiment")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--objective", objective, "plain, weighted, targeted or cost-penalty")
        ->check(CLI::IsMember({"plain", "weighted", "targeted", "cost-penalty"}))
        ->capture_default_str();
    app->add_option("--lambda", lambda, "Cost weight for cost-penalty")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app->add_option("--budget", budget, "Per-round intervention budget (default: none)")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--config", config_path,
                    "Planner config JSON; explicitly given flags override it")
        ->check(CLI::ExistingFile);
    app->add_option("--seed", seed, "Tie-break seed")->capture_default_str();
  }

  PlannerConfig build(const CLI::App* app) const {
    PlannerConfig c;
    if (!config_path.empty()) c = config_from_json(json::parse(read_file(config_path)));
    auto given = [&](const char* flag) {
      const CLI::Option* opt = app->get_option_no_throw(flag);
      return opt && (opt->count() > 0 || config_path.empty());
    };
    if (given("--strategy")) c.strategy = *parse_strategy(strategy);
    if (given("--kmax")) c.ip.k_max = k_max;
    if (given("--objective")) c.ip.objective.kind = *parse_objective_kind(objective);
    if (given("--lambda")) c.ip.objective.lambda = lambda;
    if (app->count("--budget")) c.ip.budget = budget;
    if (given("--seed")) c.seed = seed;
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive intervention planning for causal structure discovery"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Sample an Erdos-Renyi DAG as an edge list");
  ErdosRenyiSpec er;
  std::string gen_out;
  gen->add_option("--n", er.n, "Vertex count")->required()->check(CLI::PositiveNumber);
  gen->add_option("--p", er.p, "Edge probability")->required()->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", er.seed, "Sampling seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output file (default: stdout)");

  // stats
  auto* stats = app.add_subcommand("stats", "Structural statistics of a graph file");
  std::string stats_path;
  bool stats_json = false;
  stats->add_option("graph", stats_path, "Edge list or .bif file")->required()->check(CLI::ExistingFile);
  stats->add_flag("--json", stats_json, "Print JSON instead of text");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run the planner against a simulated oracle");
  std::string sim_graph;
  std::optional<std::size_t> sim_n;
  double sim_p = 0.0;
  std::uint64_t sim_graph_seed = 0;
  std::string sim_out;
  std::size_t sim_max_rounds = 0;
  PlanFlags sim_flags;
  sim->add_option("graph", sim_graph, "Truth DAG file (edge list or .bif)")->check(CLI::ExistingFile);
  sim->add_option("--n", sim_n, "Generate the truth instead: vertex count")->check(CLI::PositiveNumber);
  sim->add_option("--p", sim_p, "Generated truth: edge probability")->check(CLI::Range(0.0, 1.0));
  sim->add_option("--graph-seed", sim_graph_seed, "Generated truth: sampling seed");
  sim->add_option("--max-rounds", sim_max_rounds, "Round cap (default 4 * C(n, 2))");
  sim->add_option("--out", sim_out, "Write the run record JSON here");
  sim_flags.add(sim, true);

  // bench
  auto* bench = app.add_subcommand("bench", "Run a benchmark grid");
  std::string grid_path;
  std::string bench_out = "bench-out";
  std::optional<std::size_t> bench_threads;
  std::optional<std::uint64_t> bench_seed;
  bench->add_option("grid", grid_path, "Grid JSON file")->required()->check(CLI::ExistingFile);
  bench->add_option("--out", bench_out, "Output directory")->capture_default_str();
  bench->add_option("--threads", bench_threads, "Worker threads (overrides the grid)");
  bench->add_option("--seed", bench_seed, "Master seed (overrides the grid)");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the advisor HTTP service");
  std::string addr = env_or("CAUSALIP_ADDR", "127.0.0.1:8080");
  std::string data_dir = env_or("CAUSALIP_DATA_DIR", "");
  serve->add_option("--addr", addr, "host:port (env CAUSALIP_ADDR)")->capture_default_str();
  serve->add_option("--data-dir", data_dir,
                    "Session storage (env CAUSALIP_DATA_DIR; empty keeps sessions in memory)");

  // dump-ip
  auto* dump = app.add_subcommand("dump-ip", "Print the round's integer program in LP format");
  std::string dump_pkg;
  std::string dump_out;
  PlanFlags dump_flags;
  dump->add_option("pkg", dump_pkg, "PKG JSON file")->required()->check(CLI::ExistingFile);
  dump->add_option("--out", dump_out, "Output file (default: stdout)");
  dump_flags.add(dump, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      write_output(gen_out, save_edge_list(erdos_renyi_dag(er)));
    } else if (*stats) {
      auto g = load_graph_file(stats_path);
      auto s = structural_stats(g.dag);
      if (stats_json) {
        std::cout << json{{"nodes", s.nodes},
                          {"edges", s.edges},
                          {"min_degree", s.min_degree},
                          {"avg_degree", s.avg_degree},
                          {"max_degree", s.max_degree},
                          {"stdev_degree", s.stdev_degree},
                          {"v_structures", s.v_structures}}
                         .dump(2)
                  << '\n';
      } else {
        std::printf("nodes %zu\nedges %zu\nmin-degree %zu\navg-degree %.2f\nmax-degree %zu\n"
                    "stdev-degree %.2f\nv-structures %zu\n",
                    s.nodes, s.edges, s.min_degree, s.avg_degree, s.max_degree, s.stdev_degree,
                    s.v_structures);
      }
    } else if (*sim) {
      if (sim_graph.empty() == !sim_n) {
        std::cerr << "simulate: give either a graph file or --n/--p\n";
        return 2;
      }
      Dag truth = sim_n ? erdos_renyi_dag({*sim_n, sim_p, sim_graph_seed})
                        : load_graph_file(sim_graph).dag;
      PlannerConfig config = sim_flags.build(sim);
      if (sim->count("--max-rounds")) config.max_rounds = sim_max_rounds;
      int code = 0;
      RunRecord record;
      try {
        record = simulate(truth, config);
      } catch (const RoundCapError& e) {
        record = e.record();
        std::cerr << "simulate: " << e.what() << '\n';
        code = 3;
      }
      if (!sim_out.empty()) write_output(sim_out, run_to_json(record, config).dump(2) + "\n");
      std::cout << "rounds: " << record.round_count()
                << ", manipulations: " << record.total_manipulations << '\n';
      return code;
    } else if (*bench) {
      fs::path grid_file(grid_path);
      GridSpec spec = grid_from_json(json::parse(read_file(grid_path)),
                                     grid_file.parent_path().string());
      if (bench_threads) spec.threads = *bench_threads;
      if (bench_seed) spec.master_seed = *bench_seed;
      ResultTable table = run_grid(spec);
      fs::create_directories(bench_out);
      write_output((fs::path(bench_out) / "results.csv").string(), to_csv(table));
      if (table.error) {
        std::cerr << "bench: " << *table.error << " (partial results written)\n";
        return 3;
      }
      bool paired = false;
      for (auto s : spec.strategies) paired |= s == Strategy::kRandom;
      if (paired && spec.strategies.size() == 2)
        write_output((fs::path(bench_out) / "summary.json").string(),
                     summary_to_json(summarize_delta(table)).dump(2) + "\n");
      std::cout << table.rows.size() << " runs written to " << bench_out << '\n';
    } else if (*serve) {
      auto colon = addr.rfind(':');
      if (colon == std::string::npos) {
        std::cerr << "serve: --addr must be host:port\n";
        return 2;
      }
      std::string host = addr.substr(0, colon);
      int port = std::stoi(addr.substr(colon + 1));
      std::optional<fs::path> dir;
      if (!data_dir.empty()) dir = data_dir;
      AdvisorService service(dir);
      httplib::Server server;
      install_routes(server, service);
      std::cerr << "listening on " << host << ':' << port << '\n';
      if (!server.listen(host, port)) {
        std::cerr << "serve: cannot listen on " << addr << '\n';
        return 1;
      }
    } else if (*dump) {
      Pkg pkg = pkg_from_json(json::parse(read_file(dump_pkg)));
      PlannerConfig config = dump_flags.build(dump);
      write_output(dump_out, to_lp(build_instance(pkg, config.costs, config.ip)));
    }
  } catch (const Error& e) {
    std::cerr << e.code() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
