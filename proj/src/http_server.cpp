#include "rwr/http_server.hpp"

#include "httplib.h"
#include "rwr/error.hpp"

namespace rwr {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kJson = "application/json";

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownSession: return 404;
    case ErrorCode::SessionFinished: return 409;
    case ErrorCode::SeriesTooShort:
    case ErrorCode::EmptyAfterExclusion: return 422;
    case ErrorCode::InvalidRule:
    case ErrorCode::PositionOutOfRange:
    case ErrorCode::InvalidConfig: return 400;
    default: return 500;
  }
}

void send_error(httplib::Response& res, int status, std::string_view code, std::string_view message) {
  ordered_json body;
  body["error"] = code;
  body["message"] = message;
  res.status = status;
  res.set_content(body.dump(), kJson);
}

template <typename Handler>
auto guarded(Handler handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const Error& e) {
      send_error(res, http_status(e.code()), to_string(e.code()), e.what());
    } catch (const nlohmann::json::exception& e) {
      send_error(res, 400, "BadRequest", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "Internal", e.what());
    }
  };
}

}  // namespace

ordered_json set_view_json(const SetView& view) {
  ordered_json j;
  j["set_seq"] = view.set_seq;
  ordered_json figures = ordered_json::array();
  for (int p = 0; p < kSetSize; ++p) {
    const Figure& f = view.figures[p];
    ordered_json figure;
    figure["position"] = p;
    figure["shape"] = to_string(f.shape);
    figure["shade"] = to_string(f.shade);
    figure["size"] = to_string(f.size);
    figures.push_back(std::move(figure));
  }
  j["figures"] = std::move(figures);
  return j;
}

ordered_json click_response_json(const ClickResponse& response) {
  ordered_json j;
  j["feedback"] = response.feedback == Feedback::Right ? kRightChoice : kWrongChoice;
  j["status"] = to_string(response.status);
  if (response.next_set) j["next_set"] = set_view_json(*response.next_set);
  return j;
}

HttpServer::HttpServer(SessionService& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto& server = *server_;
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });

  server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"status":"ok"})", kJson);
  });

  server.Post("/api/v1/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
    std::optional<std::string> rule;
    std::optional<std::uint64_t> seed;
    if (!req.body.empty()) {
      const auto body = nlohmann::json::parse(req.body);
      if (!body.is_object()) throw Error(ErrorCode::InvalidConfig, "request body must be an object");
      if (body.contains("rule")) rule = body.at("rule").get<std::string>();
      if (body.contains("seed")) seed = body.at("seed").get<std::uint64_t>();
    }
    const auto created = service_.create_session(rule, seed);
    ordered_json out;
    out["session_id"] = created.session_id;
    out["set"] = set_view_json(created.set);
    res.status = 201;
    res.set_content(out.dump(), kJson);
  }));

  server.Get(R"(/api/v1/sessions/([0-9A-Za-z_-]+)/set)",
             guarded([this](const httplib::Request& req, httplib::Response& res) {
               res.set_content(set_view_json(service_.current_set(req.matches[1])).dump(), kJson);
             }));

  server.Post(R"(/api/v1/sessions/([0-9A-Za-z_-]+)/clicks)",
              guarded([this](const httplib::Request& req, httplib::Response& res) {
                const auto body = nlohmann::json::parse(req.body);
                const int position = body.at("position").get<int>();
                const auto response = service_.submit_click(req.matches[1], position);
                res.set_content(click_response_json(response).dump(), kJson);
              }));

  server.Get(R"(/api/v1/sessions/([0-9A-Za-z_-]+)/summary)",
             guarded([this](const httplib::Request& req, httplib::Response& res) {
               res.set_content(service_.summary_json(req.matches[1]), kJson);
             }));
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound < 0) throw Error(ErrorCode::BindFailure, "cannot bind " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port)) {
    throw Error(ErrorCode::BindFailure, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::serve() { server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_ && server_->is_running()) server_->stop();
}

}  // namespace rwr
