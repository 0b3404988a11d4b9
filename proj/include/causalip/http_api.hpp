#pragma once

#include <string_view>

#include "causalip/service.hpp"

namespace httplib {
class Server;
}

namespace causalip {

// HTTP status for an error code ("NotFoundError" -> 404, ...).
int http_status(std::string_view error_code);

// Routes:
//   POST /sessions                  {"pkg"?, "truth"?, "config"?, "accept_contradictions"?}
//   GET  /sessions/{id}
//   GET  /sessions/{id}/proposal
//   POST /sessions/{id}/outcomes    {"outcomes": [{"test": "O_1_0", "result": "present"}]}
//   POST /sessions/{id}/whatif      {"intervention": [0, 2]}
//   GET  /sessions/{id}/history
//   GET  /healthz
// Errors come back as {"error": {"code": "...", "message": "..."}}.
void install_routes(httplib::Server& server, AdvisorService& service);

}  // namespace causalip
