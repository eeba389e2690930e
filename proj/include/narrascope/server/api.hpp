#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <thread>

#include "narrascope/error.hpp"
#include "narrascope/ingest/poller.hpp"
#include "narrascope/server/events.hpp"
#include "narrascope/session/session.hpp"
#include "json.hpp"

namespace httplib {
class Server;
}

namespace narrascope::server {

enum class ApiErrorCode { kNotEnoughData, kDegenerateTable, kBadRequest, kNotFound, kInternal };

std::string_view to_string(ApiErrorCode code);
int http_status(ApiErrorCode code);

struct ApiError {
  ApiErrorCode code = ApiErrorCode::kInternal;
  std::string message;

  nlohmann::ordered_json to_json() const;
};

// Every pipeline error kind maps to exactly one code.
ApiErrorCode classify(ErrorKind kind);
ApiError to_api_error(const Error& error);

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  // Empty allows http(s)://localhost, 127.0.0.1 and [::1] on any port.
  std::string allowed_origin;
};

bool origin_allowed(std::string_view origin, std::string_view configured);

// /api/v1 over a session. Snapshot events are pushed to /api/v1/events as
// soon as the session records them; cycle reports arrive through
// publish_cycle.
class ApiServer {
 public:
  ApiServer(session::Session& session, ServerOptions options);
  ~ApiServer();

  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  // Binds and serves on a background thread; returns the bound port.
  // Throws Error(kInvalidArgument) when the address cannot be bound.
  int start();
  // Binds and serves on the calling thread until stop().
  void run();
  void stop();

  void publish_cycle(const ingest::CycleReport& report);
  EventBroker& events() { return *broker_; }

 private:
  int bind();
  void install_routes();

  session::Session& session_;
  ServerOptions options_;
  std::shared_ptr<EventBroker> broker_;
  std::unique_ptr<httplib::Server> http_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace narrascope::server
