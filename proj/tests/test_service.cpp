#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include <unistd.h>

#include "doctest.h"
#include "httplib.h"

#include "causalip/essential.hpp"
#include "causalip/errors.hpp"
#include "causalip/http_api.hpp"
#include "causalip/meek.hpp"
#include "causalip/serialization.hpp"
#include "causalip/service.hpp"
#include "causalip/transitions.hpp"
#include "support/oracles.hpp"

using namespace causalip;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

Dag chain() { return validate_dag(3, std::vector<DirectedEdge>{{0, 1}, {1, 2}}); }

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("causalip-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

SessionInit demo(const Dag& truth, std::size_t k = 1, std::uint64_t seed = 0) {
  SessionInit init;
  init.truth = truth;
  init.config.ip.k_max = k;
  init.config.seed = seed;
  return init;
}

SessionInit interactive(const Pkg& pkg, std::size_t k = 1, std::uint64_t seed = 0) {
  SessionInit init;
  init.pkg = pkg;
  init.config.ip.k_max = k;
  init.config.seed = seed;
  return init;
}

std::vector<TestOutcome> truthful(const Dag& truth, const ProposalView& p) {
  std::vector<TestOutcome> out;
  for (const auto& t : p.pending) {
    bool present = t.kind == TestKind::kOrientation ? truth.has_edge(t.from, t.to)
                                                     : truth.adjacent(t.from, t.to);
    out.push_back({t, present ? Result::kPresent : Result::kAbsent});
  }
  return out;
}

}  // namespace

TEST_CASE("create_session") {
  AdvisorService svc;
  auto id = svc.create_session(demo(chain()));
  auto view = svc.get_session(id);
  CHECK(view.mode == SessionMode::kDemo);
  CHECK(view.pkg == cpdag_of(chain()));
  CHECK(view.ambiguity == 2);
  CHECK_FALSE(view.done);
  CHECK(svc.create_session(demo(chain())) != id);

  CHECK_THROWS_AS(svc.create_session(SessionInit{}), ValidationError);
  Pkg cyclic(3);
  cyclic.set_known(0, 1);
  cyclic.set_known(1, 2);
  cyclic.set_known(2, 0);
  CHECK_THROWS_AS(svc.create_session(interactive(cyclic)), ValidationError);
  CHECK_THROWS_AS(svc.create_session(interactive(cpdag_of(chain()), 0)), ValidationError);
  CHECK_THROWS_AS(svc.get_session("nope"), NotFoundError);
}

TEST_CASE("chain session: proposal, outcomes, what-if") {
  AdvisorService svc;
  auto id = svc.create_session(interactive(cpdag_of(chain())));
  auto p = svc.get_proposal(id);
  CHECK(p.experiments == std::vector<InterventionSet>{{1}});
  CHECK(p.tests == std::vector{Test::orientation(1, 0), Test::orientation(1, 2)});
  CHECK(p.gain == 2);
  // Idempotent until outcomes arrive.
  auto again = svc.get_proposal(id);
  CHECK(again.tests == p.tests);
  CHECK(again.round == p.round);

  auto w = svc.whatif(id, {0});
  CHECK(w.gain == 1);
  CHECK(w.feasible);
  CHECK(svc.whatif(id, {1}).gain == 2);
  CHECK_THROWS_AS(svc.whatif(id, {7}), NotViableError);

  auto first = svc.submit_outcomes(id, {{Test::orientation(1, 0), Result::kAbsent}});
  CHECK_FALSE(first.round_closed);
  CHECK(first.pending == std::vector{Test::orientation(1, 2)});
  CHECK_THROWS_AS(svc.submit_outcomes(id, {{Test::orientation(1, 0), Result::kAbsent}}),
                  DuplicateSubmissionError);
  CHECK_THROWS_AS(svc.submit_outcomes(id, {{Test::orientation(0, 1), Result::kAbsent}}),
                  UnknownTestError);
  auto second = svc.submit_outcomes(id, {{Test::orientation(1, 2), Result::kPresent}});
  CHECK(second.round_closed);
  CHECK(second.ambiguity == 0);
  CHECK(second.pkg == fully_resolved(chain()));
  CHECK(svc.history(id).size() == 1);
  CHECK(svc.get_session(id).done);
  CHECK_THROWS_AS(svc.get_proposal(id), SessionDoneError);
}

TEST_CASE("what-if on an Adjacent-only PKG with nothing intervened") {
  AdvisorService svc;
  Pkg p(4);
  p.set_adjacent(0, 1);
  p.set_adjacent(2, 3);
  auto id = svc.create_session(interactive(p));
  CHECK(svc.whatif(id, {}).gain == 0);
  auto w = svc.whatif(id, {0});
  CHECK(w.breakdown.size() == 2);
  CHECK(w.gain == 1);
}

TEST_CASE("demo contradictions are rejected unless accepted") {
  AdvisorService svc;
  auto id = svc.create_session(demo(chain()));
  svc.get_proposal(id);
  CHECK_THROWS_AS(svc.submit_outcomes(id, {{Test::orientation(1, 2), Result::kAbsent}}),
                  ContradictionError);
  CHECK(svc.get_session(id).pending_tests == 2);

  auto init = demo(chain());
  init.accept_contradictions = true;
  auto lenient = svc.create_session(init);
  svc.get_proposal(lenient);
  auto r = svc.submit_outcomes(lenient, {{Test::orientation(1, 0), Result::kPresent},
                                         {Test::orientation(1, 2), Result::kPresent}});
  CHECK(r.round_closed);
  CHECK(r.pkg.is_known(1, 0));
}

TEST_CASE("a batch with an unknown test records nothing") {
  AdvisorService svc;
  auto id = svc.create_session(interactive(cpdag_of(chain())));
  svc.get_proposal(id);
  CHECK_THROWS_AS(svc.submit_outcomes(id, {{Test::orientation(1, 0), Result::kAbsent},
                                           {Test::orientation(2, 1), Result::kAbsent}}),
                  UnknownTestError);
  CHECK(svc.get_session(id).pending_tests == 2);
}

TEST_CASE("property: service rounds equal meek_closure(apply_outcomes(...))") {
  std::mt19937_64 rng(6);
  AdvisorService svc;
  for (int t = 0; t < 60; ++t) {
    auto truth = oracle::random_dag(3 + rng() % 6, 0.5, rng);
    auto id = svc.create_session(interactive(cpdag_of(truth), 1 + rng() % 3, rng()));
    while (!svc.get_session(id).done) {
      Pkg before = svc.get_session(id).pkg;
      auto p = svc.get_proposal(id);
      auto outcomes = truthful(truth, p);
      // Deliver in two halves to exercise partial buffering.
      std::vector<TestOutcome> head(outcomes.begin(), outcomes.begin() + outcomes.size() / 2);
      std::vector<TestOutcome> tail(outcomes.begin() + outcomes.size() / 2, outcomes.end());
      if (!head.empty()) CHECK_FALSE(svc.submit_outcomes(id, head).round_closed);
      auto r = svc.submit_outcomes(id, tail);
      CHECK(r.round_closed);
      std::vector<TestOutcome> issue_order;
      for (const auto& test : p.tests)
        for (const auto& o : outcomes)
          if (o.test == test) issue_order.push_back(o);
      CHECK(r.pkg == meek_closure(apply_outcomes(before, issue_order)));
    }
    CHECK(svc.get_session(id).pkg == fully_resolved(truth));
  }
}

TEST_CASE("demo full loop matches the headless planner") {
  std::mt19937_64 rng(10);
  AdvisorService svc;
  for (int t = 0; t < 30; ++t) {
    auto truth = oracle::random_dag(4 + rng() % 6, 0.5, rng);
    auto init = demo(truth, 1 + rng() % 3, rng());
    auto id = svc.create_session(init);
    while (!svc.get_session(id).done) {
      auto p = svc.get_proposal(id);
      svc.submit_outcomes(id, truthful(truth, p));
    }
    auto record = simulate(truth, init.config);
    CHECK(svc.get_session(id).pkg == record.final_pkg);
    CHECK(svc.history(id).size() == record.round_count());
  }
}

TEST_CASE("sessions survive a restart") {
  TempDir dir;
  std::mt19937_64 rng(77);
  std::vector<std::string> ids;
  std::map<std::string, std::pair<SessionView, std::size_t>> before;
  std::map<std::string, ProposalView> open;
  {
    AdvisorService svc(dir.path);
    for (int t = 0; t < 10; ++t) {
      auto truth = oracle::random_dag(5 + rng() % 4, 0.5, rng);
      auto id = svc.create_session(demo(truth, 2, t));
      // Run a random number of rounds, leaving some half-answered.
      int rounds = rng() % 3;
      for (int r = 0; r < rounds && !svc.get_session(id).done; ++r)
        svc.submit_outcomes(id, truthful(truth, svc.get_proposal(id)));
      if (!svc.get_session(id).done && t % 2) {
        auto p = svc.get_proposal(id);
        auto outcomes = truthful(truth, p);
        if (outcomes.size() > 1) svc.submit_outcomes(id, {outcomes.front()});
        open[id] = svc.get_proposal(id);
      }
      before[id] = {svc.get_session(id), svc.history(id).size()};
      ids.push_back(id);
    }
  }
  // A torn trailing write is ignored.
  {
    std::ofstream torn(dir.path / ids.front() / "events.jsonl", std::ios::app);
    torn << "{\"type\": \"outc";
  }
  AdvisorService reloaded(dir.path);
  CHECK(reloaded.session_ids().size() == ids.size());
  for (const auto& id : ids) {
    auto v = reloaded.get_session(id);
    CHECK(v.pkg == before[id].first.pkg);
    CHECK(v.rounds_closed == before[id].first.rounds_closed);
    CHECK(v.pending_tests == before[id].first.pending_tests);
    CHECK(v.open_round == before[id].first.open_round);
    CHECK(reloaded.history(id).size() == before[id].second);
    if (open.count(id)) {
      auto p = reloaded.get_proposal(id);
      CHECK(p.tests == open[id].tests);
      CHECK(p.pending == open[id].pending);
    }
    CHECK(fs::exists(dir.path / id / "snapshot.json"));
  }
}

TEST_CASE("proposals are determined by the session seed and round") {
  std::mt19937_64 rng(4);
  auto truth = oracle::random_dag(8, 0.5, rng);
  AdvisorService a, b;
  auto ia = a.create_session(demo(truth, 2, 99));
  auto ib = b.create_session(demo(truth, 2, 99));
  while (!a.get_session(ia).done) {
    auto pa = a.get_proposal(ia);
    auto pb = b.get_proposal(ib);
    CHECK(pa.experiments == pb.experiments);
    a.submit_outcomes(ia, truthful(truth, pa));
    b.submit_outcomes(ib, truthful(truth, pb));
  }
}

TEST_CASE("concurrent sessions are independent") {
  AdvisorService svc;
  std::vector<std::thread> threads;
  std::atomic<int> ok{0};
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      std::mt19937_64 rng(t);
      auto truth = oracle::random_dag(7, 0.5, rng);
      auto id = svc.create_session(demo(truth, 2, t));
      while (!svc.get_session(id).done) svc.submit_outcomes(id, truthful(truth, svc.get_proposal(id)));
      if (svc.get_session(id).pkg == fully_resolved(truth)) ++ok;
    });
  }
  for (auto& th : threads) th.join();
  CHECK(ok == 8);
}

TEST_CASE("HTTP endpoints") {
  AdvisorService svc;
  httplib::Server server;
  install_routes(server, svc);
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread runner([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client client("127.0.0.1", port);

  auto health = client.Get("/healthz");
  REQUIRE(health);
  CHECK(health->status == 200);

  json create = {{"truth", dag_to_json(chain())}, {"config", {{"k_max", 1}}}};
  auto created = client.Post("/sessions", create.dump(), "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  auto session = json::parse(created->body);
  std::string id = session["id"];
  CHECK(session["pkg"]["adjacent"] == json{{0, 1}, {1, 2}});
  CHECK(session["mode"] == "demo");

  auto proposal = json::parse(client.Get("/sessions/" + id + "/proposal")->body);
  CHECK(proposal["interventions"] == json{{1}});
  CHECK(proposal["gain"] == 2.0);
  CHECK(proposal["tests"].size() == 2);
  CHECK(proposal["tests"][0]["id"] == "O_1_0");

  auto whatif = client.Post("/sessions/" + id + "/whatif", R"({"intervention": [0]})",
                            "application/json");
  CHECK(whatif->status == 200);
  CHECK(json::parse(whatif->body)["gain"] == 1.0);

  auto bad_vertex = client.Post("/sessions/" + id + "/whatif", R"({"intervention": [9]})",
                                "application/json");
  CHECK(bad_vertex->status == 422);
  CHECK(json::parse(bad_vertex->body)["error"]["code"] == "NotViableError");

  auto contradiction = client.Post("/sessions/" + id + "/outcomes",
                                   R"({"outcomes": [{"test": "O_1_2", "result": "absent"}]})",
                                   "application/json");
  CHECK(contradiction->status == 409);
  CHECK(json::parse(contradiction->body)["error"]["code"] == "ContradictionError");

  auto unknown = client.Post("/sessions/" + id + "/outcomes",
                             R"({"test": "O_0_1", "result": "absent"})", "application/json");
  CHECK(unknown->status == 422);
  CHECK(json::parse(unknown->body)["error"]["code"] == "UnknownTestError");

  auto partial = client.Post("/sessions/" + id + "/outcomes",
                             R"({"outcomes": [{"test": "O_1_0", "result": "absent"}]})",
                             "application/json");
  CHECK(partial->status == 200);
  CHECK(json::parse(partial->body)["round_closed"] == false);
  auto dup = client.Post("/sessions/" + id + "/outcomes",
                         R"({"outcomes": [{"test": "O_1_0", "result": "absent"}]})",
                         "application/json");
  CHECK(dup->status == 409);
  CHECK(json::parse(dup->body)["error"]["code"] == "DuplicateSubmissionError");

  auto closed = client.Post("/sessions/" + id + "/outcomes",
                            R"({"outcomes": [{"test": "O_1_2", "result": "present"}]})",
                            "application/json");
  auto closed_doc = json::parse(closed->body);
  CHECK(closed_doc["round_closed"] == true);
  CHECK(closed_doc["ambiguity"] == 0);
  CHECK(closed_doc["pkg"]["known"] == json{{0, 1}, {1, 2}});

  auto history = json::parse(client.Get("/sessions/" + id + "/history")->body);
  CHECK(history["rounds"].size() == 1);
  CHECK(history["rounds"][0]["transitions"].size() == 2);

  auto done = client.Get("/sessions/" + id + "/proposal");
  CHECK(done->status == 409);
  CHECK(json::parse(done->body)["error"]["code"] == "SessionDoneError");

  auto missing = client.Get("/sessions/doesnotexist");
  CHECK(missing->status == 404);
  CHECK(json::parse(missing->body)["error"]["code"] == "NotFoundError");

  auto malformed = client.Post("/sessions", "{not json", "application/json");
  CHECK(malformed->status == 400);
  CHECK(json::parse(malformed->body)["error"]["code"] == "ValidationError");
  auto bad_pkg = client.Post("/sessions", R"({"pkg": {"n": 2, "known": [[0, 3]]}})",
                             "application/json");
  CHECK(bad_pkg->status == 400);

  auto interactive_doc = json{{"pkg", pkg_to_json(cpdag_of(chain()))}};
  auto inter = client.Post("/sessions", interactive_doc.dump(), "application/json");
  CHECK(json::parse(inter->body)["mode"] == "interactive");

  server.stop();
  runner.join();
}
