#include "causalip/http_api.hpp"

#include <functional>
#include <map>

#include "httplib.h"

#include "causalip/serialization.hpp"

namespace causalip {

using nlohmann::json;

int http_status(std::string_view code) {
  static const std::map<std::string_view, int> table = {
      {"NotFoundError", 404},
      {"ValidationError", 400},
      {"ConfigError", 400},
      {"ParseError", 400},
      {"BadRequest", 400},
      {"DuplicateSubmissionError", 409},
      {"SessionDoneError", 409},
      {"ContradictionError", 409},
      {"ConflictError", 409},
      {"InconsistentPkgError", 409},
      {"NotViableError", 422},
      {"UnknownTestError", 422},
      {"InvalidTestError", 422},
  };
  auto it = table.find(code);
  return it == table.end() ? 500 : it->second;
}

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, std::string_view code, const std::string& message) {
  send_json(res, http_status(code),
            {{"error", {{"code", std::string(code)}, {"message", message}}}});
}

using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

Handler guarded(Handler inner) {
  return [inner = std::move(inner)](const httplib::Request& req, httplib::Response& res) {
    try {
      inner(req, res);
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    } catch (const json::exception& e) {
      send_error(res, "ValidationError", std::string("malformed request body: ") + e.what());
    } catch (const std::exception& e) {
      send_error(res, "InternalError", e.what());
    }
  };
}

json body_of(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json doc = json::parse(req.body);
  if (!doc.is_object()) throw ValidationError("request body must be an object");
  return doc;
}

SessionInit init_from_json(const json& doc) {
  SessionInit init;
  if (doc.contains("pkg")) init.pkg = pkg_from_json(doc.at("pkg"));
  if (doc.contains("truth")) init.truth = dag_from_json(doc.at("truth"));
  if (doc.contains("config")) {
    try {
      init.config = config_from_json(doc.at("config"));
    } catch (const ConfigError& e) {
      throw ValidationError(e.what());
    }
  }
  init.accept_contradictions = doc.value("accept_contradictions", false);
  return init;
}

}  // namespace

void install_routes(httplib::Server& server, AdvisorService& service) {
  server.Get("/healthz", guarded([](const httplib::Request&, httplib::Response& res) {
               send_json(res, 200, {{"status", "ok"}});
             }));

  server.Post("/sessions", guarded([&service](const httplib::Request& req,
                                              httplib::Response& res) {
                std::string id = service.create_session(init_from_json(body_of(req)));
                send_json(res, 201, view_to_json(service.get_session(id)));
              }));

  server.Get(R"(/sessions/([0-9a-zA-Z_-]+))",
             guarded([&service](const httplib::Request& req, httplib::Response& res) {
               send_json(res, 200, view_to_json(service.get_session(req.matches[1])));
             }));

  server.Get(R"(/sessions/([0-9a-zA-Z_-]+)/proposal)",
             guarded([&service](const httplib::Request& req, httplib::Response& res) {
               send_json(res, 200, proposal_to_json(service.get_proposal(req.matches[1])));
             }));

  server.Post(R"(/sessions/([0-9a-zA-Z_-]+)/outcomes)",
              guarded([&service](const httplib::Request& req, httplib::Response& res) {
                json doc = body_of(req);
                std::vector<TestOutcome> outcomes;
                try {
                  if (doc.contains("outcomes")) {
                    for (const auto& o : doc.at("outcomes")) outcomes.push_back(outcome_from_json(o));
                  } else {
                    outcomes.push_back(outcome_from_json(doc));
                  }
                } catch (const ParseError& e) {
                  throw ValidationError(e.what());
                }
                send_json(res, 200, submit_to_json(service.submit_outcomes(req.matches[1], outcomes)));
              }));

  server.Post(R"(/sessions/([0-9a-zA-Z_-]+)/whatif)",
              guarded([&service](const httplib::Request& req, httplib::Response& res) {
                json doc = body_of(req);
                auto members = doc.at("intervention").get<std::vector<VertexId>>();
                send_json(res, 200, whatif_to_json(service.whatif(req.matches[1],
                                                                  InterventionSet(members))));
              }));

  server.Get(R"(/sessions/([0-9a-zA-Z_-]+)/history)",
             guarded([&service](const httplib::Request& req, httplib::Response& res) {
               json rounds = json::array();
               for (const auto& r : service.history(req.matches[1]))
                 rounds.push_back(round_to_json(r));
               send_json(res, 200, {{"rounds", rounds}});
             }));
}

}  // namespace causalip
