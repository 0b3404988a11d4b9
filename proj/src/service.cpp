#include "causalip/service.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "causalip/essential.hpp"
#include "causalip/meek.hpp"
#include "causalip/serialization.hpp"

namespace causalip {

using nlohmann::json;
namespace fs = std::filesystem;

struct AdvisorService::Session {
  std::string id;
  SessionMode mode = SessionMode::kInteractive;
  std::optional<Dag> truth;
  bool accept_contradictions = false;
  PlannerConfig config;
  Pkg pkg;
  std::vector<RoundLog> history;
  std::optional<OpenRound> open;
  std::mutex mutex;
};

namespace {

std::string random_id() {
  static std::mutex m;
  static std::mt19937_64 gen{std::random_device{}()};
  std::lock_guard lock(m);
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << gen();
  return out.str();
}

json sets_json(const std::vector<InterventionSet>& sets) {
  json out = json::array();
  for (const auto& s : sets) out.push_back(s.members());
  return out;
}

json tests_json(const std::vector<Test>& tests) {
  json out = json::array();
  for (const auto& t : tests) out.push_back(test_to_json(t));
  return out;
}

Test test_from_id(const json& v) {
  if (!v.is_string()) throw ValidationError("test id must be a string");
  auto t = Test::parse_id(v.get<std::string>());
  if (!t) throw ValidationError("bad test id: " + v.get<std::string>());
  return *t;
}

bool truth_answer(const Dag& truth, const Test& t) {
  if (t.kind == TestKind::kOrientation) return truth.has_edge(t.from, t.to);
  return truth.adjacent(t.from, t.to);
}

OpenRound make_open(std::size_t index, Proposal proposal) {
  OpenRound open{index, std::move(proposal), {}, InteractiveRound({})};
  std::vector<Test> issued;
  for (std::size_t e = 0; e < open.proposal.tests.size(); ++e)
    for (const auto& t : open.proposal.tests[e]) {
      issued.push_back(t);
      open.experiment_of.push_back(e);
    }
  open.answers = InteractiveRound(std::move(issued));
  return open;
}

json proposal_event(const OpenRound& open) {
  json tests = json::array();
  for (const auto& per : open.proposal.tests) {
    json ids = json::array();
    for (const auto& t : per) ids.push_back(t.id());
    tests.push_back(ids);
  }
  return {{"type", "proposed"},
          {"round", open.index},
          {"experiments", sets_json(open.proposal.experiments)},
          {"tests", tests},
          {"objective", open.proposal.objective}};
}

Proposal proposal_from_event(const json& ev) {
  Proposal p;
  for (const auto& members : ev.at("experiments"))
    p.experiments.emplace_back(members.get<std::vector<VertexId>>());
  for (const auto& per : ev.at("tests")) {
    std::vector<Test> ts;
    for (const auto& id : per) ts.push_back(test_from_id(id));
    p.tests.push_back(std::move(ts));
  }
  p.objective = ev.at("objective").get<double>();
  return p;
}

}  // namespace

json dag_to_json(const Dag& dag) {
  json edges = json::array();
  for (const auto& e : dag.edges()) edges.push_back({e.from, e.to});
  return {{"n", dag.size()}, {"edges", edges}};
}

Dag dag_from_json(const json& doc) {
  try {
    auto n = doc.at("n").get<std::size_t>();
    std::vector<DirectedEdge> edges;
    for (const auto& e : doc.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ValidationError("edge must be [from, to]");
      edges.push_back({e[0].get<VertexId>(), e[1].get<VertexId>()});
    }
    return validate_dag(n, edges);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed DAG document: ") + e.what());
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError(e.what());
  }
}

AdvisorService::AdvisorService(std::optional<fs::path> data_dir)
    : data_dir_(std::move(data_dir)) {
  if (!data_dir_) return;
  fs::create_directories(*data_dir_);
  for (const auto& entry : fs::directory_iterator(*data_dir_))
    if (entry.is_directory() && fs::exists(entry.path() / "events.jsonl")) replay(entry.path());
}

AdvisorService::~AdvisorService() = default;

AdvisorService::Session& AdvisorService::find(const std::string& id) const {
  std::shared_lock lock(sessions_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFoundError("no session " + id);
  return *it->second;
}

std::vector<std::string> AdvisorService::session_ids() const {
  std::shared_lock lock(sessions_mutex_);
  std::vector<std::string> ids;
  for (const auto& [id, _] : sessions_) ids.push_back(id);
  return ids;
}

void AdvisorService::append_event(Session& s, const json& event) {
  if (!data_dir_) return;
  fs::path dir = *data_dir_ / s.id;
  fs::create_directories(dir);
  std::ofstream out(dir / "events.jsonl", std::ios::app);
  out << event.dump() << '\n';
  out.flush();
}

void AdvisorService::write_snapshot(const Session& s) {
  if (!data_dir_) return;
  fs::path dir = *data_dir_ / s.id;
  json rounds = json::array();
  for (const auto& r : s.history) rounds.push_back(round_to_json(r));
  json snap = {{"id", s.id}, {"pkg", pkg_to_json(s.pkg)}, {"history", rounds}};
  fs::path tmp = dir / "snapshot.json.tmp";
  {
    std::ofstream out(tmp);
    out << snap.dump(2) << '\n';
  }
  fs::rename(tmp, dir / "snapshot.json");
}

std::string AdvisorService::create_session(const SessionInit& init) {
  auto s = std::make_unique<Session>();
  if (init.truth) {
    s->mode = SessionMode::kDemo;
    s->truth = init.truth;
    s->pkg = init.pkg ? *init.pkg : cpdag_of(*init.truth);
    if (s->pkg.size() != init.truth->size())
      throw ValidationError("PKG and truth DAG differ in size");
  } else if (init.pkg) {
    s->pkg = *init.pkg;
  } else {
    throw ValidationError("a session needs a PKG or a truth DAG");
  }
  try {
    check_known_acyclic(s->pkg);
  } catch (const InconsistentPkgError& e) {
    throw ValidationError(e.what());
  }
  try {
    build_instance(s->pkg, init.config.costs, init.config.ip);
  } catch (const ConfigError& e) {
    throw ValidationError(e.what());
  }
  s->config = init.config;
  s->accept_contradictions = init.accept_contradictions;

  std::unique_lock lock(sessions_mutex_);
  do s->id = random_id();
  while (sessions_.contains(s->id) ||
         (data_dir_ && fs::exists(*data_dir_ / s->id)));

  json created = {{"type", "created"},
                  {"id", s->id},
                  {"mode", s->mode == SessionMode::kDemo ? "demo" : "interactive"},
                  {"pkg", pkg_to_json(s->pkg)},
                  {"config", config_to_json(s->config)},
                  {"accept_contradictions", s->accept_contradictions}};
  if (s->truth) created["truth"] = dag_to_json(*s->truth);
  append_event(*s, created);
  write_snapshot(*s);
  std::string id = s->id;
  sessions_.emplace(id, std::move(s));
  return id;
}

SessionView AdvisorService::get_session(const std::string& id) {
  Session& s = find(id);
  std::lock_guard lock(s.mutex);
  SessionView v{s.id, s.mode, s.pkg, s.history.size(), ambiguity(s.pkg), false, {}, 0};
  v.done = v.ambiguity == 0;
  if (s.open) {
    v.open_round = s.open->index;
    v.pending_tests = s.open->answers.pending_count();
  }
  return v;
}

ProposalView AdvisorService::open_round(Session& s) {
  if (!s.open) {
    if (ambiguity(s.pkg) == 0) throw SessionDoneError("session " + s.id + " is fully resolved");
    std::size_t index = s.history.size();
    auto rng = round_rng(s.config.seed, index);
    s.open = make_open(index, propose(s.pkg, s.config, index, rng));
    append_event(s, proposal_event(*s.open));
  }
  const OpenRound& o = *s.open;
  return {o.index, o.proposal.experiments, o.answers.issued(), o.answers.pending(),
          o.proposal.objective};
}

ProposalView AdvisorService::get_proposal(const std::string& id) {
  Session& s = find(id);
  std::lock_guard lock(s.mutex);
  return open_round(s);
}

void AdvisorService::record_outcomes(Session& s, const std::vector<TestOutcome>& outcomes,
                                     bool log_events) {
  for (const auto& o : outcomes) {
    s.open->answers.submit(o.test, o.result);
    if (log_events)
      append_event(s, {{"type", "outcome"},
                       {"round", s.open->index},
                       {"test", o.test.id()},
                       {"result", o.result == Result::kPresent ? "present" : "absent"}});
  }
}

std::optional<RoundLog> AdvisorService::maybe_close(Session& s, bool log_events) {
  if (!s.open || !s.open->answers.complete()) return std::nullopt;
  auto outcomes = s.open->answers.outcomes();
  auto [next, log] = close_round(s.pkg, s.open->proposal, outcomes, s.open->index);
  s.pkg = std::move(next);
  s.history.push_back(log);
  s.open.reset();
  if (log_events) {
    append_event(s, {{"type", "closed"}, {"round", log.index}});
    write_snapshot(s);
  }
  return log;
}

SubmitResult AdvisorService::submit_outcomes(const std::string& id,
                                             const std::vector<TestOutcome>& outcomes) {
  Session& s = find(id);
  std::lock_guard lock(s.mutex);
  if (!s.open) {
    if (ambiguity(s.pkg) == 0) throw SessionDoneError("session " + id + " is fully resolved");
    open_round(s);
  }

  // Validate the whole batch before recording any of it.
  const auto& issued = s.open->answers.issued();
  std::set<Test> seen;
  for (const auto& o : outcomes) {
    if (std::find(issued.begin(), issued.end(), o.test) == issued.end())
      throw UnknownTestError("test " + o.test.id() + " was not issued in round " +
                             std::to_string(s.open->index));
    if (s.open->answers.result(o.test) || !seen.insert(o.test).second)
      throw DuplicateSubmissionError("test " + o.test.id() + " already answered");
    if (s.truth && !s.accept_contradictions &&
        truth_answer(*s.truth, o.test) != (o.result == Result::kPresent))
      throw ContradictionError("outcome for " + o.test.id() + " contradicts the demo truth");
  }
  if (seen.size() == s.open->answers.pending_count()) {
    // Dry run of the closing round so a conflicting batch leaves no trace.
    InteractiveRound trial = s.open->answers;
    for (const auto& o : outcomes) trial.submit(o.test, o.result);
    close_round(s.pkg, s.open->proposal, trial.outcomes(), s.open->index);
  }

  record_outcomes(s, outcomes, true);
  SubmitResult r;
  r.log = maybe_close(s, true);
  r.round_closed = r.log.has_value();
  if (s.open) r.pending = s.open->answers.pending();
  r.pkg = s.pkg;
  r.ambiguity = ambiguity(s.pkg);
  return r;
}

WhatIfResult AdvisorService::whatif(const std::string& id, const InterventionSet& x) {
  Session& s = find(id);
  std::lock_guard lock(s.mutex);
  auto viable = viable_vertices(s.pkg);
  for (VertexId v : x.members())
    if (!std::binary_search(viable.begin(), viable.end(), v))
      throw NotViableError("vertex " + std::to_string(v) + " has no uncertain pair");
  IpInstance instance = build_instance(s.pkg, s.config.costs, s.config.ip);
  std::vector<InterventionSet> batch{x};
  return {gain(instance, batch), feasible(instance, batch), credit_breakdown(instance, x)};
}

std::vector<RoundLog> AdvisorService::history(const std::string& id) {
  Session& s = find(id);
  std::lock_guard lock(s.mutex);
  return s.history;
}

void AdvisorService::replay(const fs::path& dir) {
  std::ifstream in(dir / "events.jsonl");
  std::string line;
  auto s = std::make_unique<Session>();
  bool created = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json ev;
    try {
      ev = json::parse(line);
    } catch (const json::exception&) {
      break;  // torn final write
    }
    const auto type = ev.at("type").get<std::string>();
    if (type == "created") {
      s->id = ev.at("id").get<std::string>();
      s->mode = ev.at("mode") == "demo" ? SessionMode::kDemo : SessionMode::kInteractive;
      s->pkg = pkg_from_json(ev.at("pkg"));
      s->config = config_from_json(ev.at("config"));
      s->accept_contradictions = ev.value("accept_contradictions", false);
      if (ev.contains("truth")) s->truth = dag_from_json(ev.at("truth"));
      created = true;
    } else if (!created) {
      throw ValidationError("event log " + (dir / "events.jsonl").string() +
                            " does not start with a created event");
    } else if (type == "proposed") {
      s->open = make_open(ev.at("round").get<std::size_t>(), proposal_from_event(ev));
    } else if (type == "outcome") {
      TestOutcome o{test_from_id(ev.at("test")),
                    ev.at("result") == "present" ? Result::kPresent : Result::kAbsent};
      record_outcomes(*s, {o}, false);
    } else if (type == "closed") {
      maybe_close(*s, false);
    }
  }
  if (!created) return;
  std::unique_lock lock(sessions_mutex_);
  std::string id = s->id;
  sessions_.emplace(id, std::move(s));
}

json view_to_json(const SessionView& v) {
  json out = {{"id", v.id},
              {"mode", v.mode == SessionMode::kDemo ? "demo" : "interactive"},
              {"pkg", pkg_to_json(v.pkg)},
              {"rounds", v.rounds_closed},
              {"ambiguity", v.ambiguity},
              {"done", v.done},
              {"pending_tests", v.pending_tests}};
  out["open_round"] = v.open_round ? json(*v.open_round) : json(nullptr);
  return out;
}

json proposal_to_json(const ProposalView& v) {
  return {{"round", v.round},
          {"interventions", sets_json(v.experiments)},
          {"tests", tests_json(v.tests)},
          {"pending", tests_json(v.pending)},
          {"gain", v.gain}};
}

json submit_to_json(const SubmitResult& r) {
  json out = {{"round_closed", r.round_closed},
              {"pending", tests_json(r.pending)},
              {"pkg", pkg_to_json(r.pkg)},
              {"ambiguity", r.ambiguity}};
  out["round"] = r.log ? round_to_json(*r.log) : json(nullptr);
  return out;
}

json whatif_to_json(const WhatIfResult& r) {
  json breakdown = json::array();
  for (const auto& c : r.breakdown) {
    json entry = {{"pair", {c.edge.from, c.edge.to}},
                  {"class", to_string(c.edge.cls)},
                  {"credit", c.credit}};
    entry["test"] = c.test ? json(c.test->id()) : json(nullptr);
    breakdown.push_back(entry);
  }
  return {{"gain", r.gain}, {"feasible", r.feasible}, {"breakdown", breakdown}};
}

}  // namespace causalip
