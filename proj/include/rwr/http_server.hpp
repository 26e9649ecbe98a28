#pragma once

#include <memory>
#include <string>

#include "json.hpp"
#include "rwr/service.hpp"

namespace httplib {
class Server;
}

namespace rwr {

nlohmann::ordered_json set_view_json(const SetView& view);
nlohmann::ordered_json click_response_json(const ClickResponse& response);

// HTTP/1.1 + JSON front end for SessionService:
//   POST /api/v1/sessions                 -> 201 {session_id, set}
//   GET  /api/v1/sessions/{id}/set        -> 200 set view
//   POST /api/v1/sessions/{id}/clicks     -> 200 {feedback, status, next_set?}
//   GET  /api/v1/sessions/{id}/summary    -> 200 JSON report
//   GET  /healthz                         -> 200 {"status":"ok"}
class HttpServer {
 public:
  explicit HttpServer(SessionService& service);
  ~HttpServer();

  // Throws Error{BindFailure}. Port 0 picks a free port; returns the bound port.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void serve();
  void stop();

 private:
  SessionService& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace rwr
