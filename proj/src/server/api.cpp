#include "narrascope/server/api.hpp"

#include <regex>
#include <set>

#include "httplib.h"
#include "narrascope/render/render.hpp"
#include "narrascope/session/snapshot_json.hpp"

namespace narrascope::server {
namespace {

constexpr auto kJson = "application/json";

void send_error(httplib::Response& res, const ApiError& err) {
  res.status = http_status(err.code);
  res.set_content(err.to_json().dump() + "\n", kJson);
}

ApiError bad_request(std::string message) {
  return {ApiErrorCode::kBadRequest, std::move(message)};
}

// Parses an object body whose keys are all in `known`.
nlohmann::json parse_body(const httplib::Request& req, const std::set<std::string>& known) {
  if (req.body.empty()) return nlohmann::json::object();
  nlohmann::json body;
  try {
    body = nlohmann::json::parse(req.body);
  } catch (const nlohmann::json::parse_error& e) {
    throw bad_request(std::string("body is not JSON: ") + e.what());
  }
  if (!body.is_object()) throw bad_request("body must be a JSON object");
  for (const auto& [key, value] : body.items()) {
    if (!known.contains(key)) throw bad_request("unknown key '" + key + "'");
  }
  return body;
}

std::vector<std::string> string_list(const nlohmann::json& body, const char* key) {
  if (!body.contains(key)) return {};
  const auto& v = body[key];
  if (!v.is_array()) throw bad_request(std::string(key) + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw bad_request(std::string(key) + " must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

// Runs a handler, translating failures into ApiError responses.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const ApiError& e) {
    send_error(res, e);
  } catch (const Error& e) {
    send_error(res, to_api_error(e));
  } catch (const std::exception& e) {
    send_error(res, {ApiErrorCode::kInternal, e.what()});
  }
}

session::SnapshotPtr find_snapshot(session::Session& s, const httplib::Request& req) {
  const auto& text = req.matches[1].str();
  std::uint64_t n = 0;
  try {
    n = std::stoull(text);
  } catch (const std::exception&) {
    throw ApiError{ApiErrorCode::kNotFound, "no snapshot " + text};
  }
  auto snap = s.snapshot(n);
  if (!snap) throw ApiError{ApiErrorCode::kNotFound, "no snapshot " + text};
  return snap;
}

nlohmann::ordered_json snapshot_event(const session::AnalysisSnapshot& s) {
  nlohmann::ordered_json j;
  j["sequence_number"] = s.sequence_number;
  j["created_at"] = ingest::format_timestamp(s.created_at);
  j["post_count"] = s.post_count;
  j["url"] = "/api/v1/snapshots/" + std::to_string(s.sequence_number);
  return j;
}

}  // namespace

std::string_view to_string(ApiErrorCode code) {
  switch (code) {
    case ApiErrorCode::kNotEnoughData: return "NOT_ENOUGH_DATA";
    case ApiErrorCode::kDegenerateTable: return "DEGENERATE_TABLE";
    case ApiErrorCode::kBadRequest: return "BAD_REQUEST";
    case ApiErrorCode::kNotFound: return "NOT_FOUND";
    case ApiErrorCode::kInternal: return "INTERNAL";
  }
  return "INTERNAL";
}

int http_status(ApiErrorCode code) {
  switch (code) {
    case ApiErrorCode::kNotEnoughData:
    case ApiErrorCode::kDegenerateTable: return 422;
    case ApiErrorCode::kBadRequest: return 400;
    case ApiErrorCode::kNotFound: return 404;
    case ApiErrorCode::kInternal: return 500;
  }
  return 500;
}

nlohmann::ordered_json ApiError::to_json() const {
  nlohmann::ordered_json j;
  j["error"]["code"] = std::string(server::to_string(code));
  j["error"]["message"] = message;
  return j;
}

ApiErrorCode classify(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInsufficientVocabulary: return ApiErrorCode::kNotEnoughData;
    case ErrorKind::kDegenerateTable: return ApiErrorCode::kDegenerateTable;
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kEmptyTermSet:
    case ErrorKind::kInvalidSpec:
    case ErrorKind::kMalformedRecord: return ApiErrorCode::kBadRequest;
    case ErrorKind::kNotFound: return ApiErrorCode::kNotFound;
    case ErrorKind::kSourceUnavailable:
    case ErrorKind::kStorageFailure:
    case ErrorKind::kTaggerFailure:
    case ErrorKind::kConvergenceFailure: return ApiErrorCode::kInternal;
  }
  return ApiErrorCode::kInternal;
}

ApiError to_api_error(const Error& error) {
  std::string message = error.what();
  if (is_not_enough_data(error.kind())) message = "not enough data yet: " + message;
  return {classify(error.kind()), std::move(message)};
}

bool origin_allowed(std::string_view origin, std::string_view configured) {
  if (origin.empty()) return false;
  if (!configured.empty()) return configured == "*" || origin == configured;
  static const std::regex kLocal(R"(^https?://(localhost|127\.0\.0\.1|\[::1\])(:[0-9]{1,5})?$)");
  return std::regex_match(origin.begin(), origin.end(), kLocal);
}

ApiServer::ApiServer(session::Session& session, ServerOptions options)
    : session_(session),
      options_(std::move(options)),
      broker_(std::make_shared<EventBroker>()),
      http_(std::make_unique<httplib::Server>()) {
  std::weak_ptr<EventBroker> weak = broker_;
  session_.add_listener([weak](const session::AnalysisSnapshot& s) {
    if (auto b = weak.lock()) b->publish("snapshot", snapshot_event(s).dump());
  });
  install_routes();
}

ApiServer::~ApiServer() { stop(); }

void ApiServer::install_routes() {
  auto& svr = *http_;
  auto& session = session_;
  const std::string allowed = options_.allowed_origin;

  svr.set_post_routing_handler([allowed](const httplib::Request& req, httplib::Response& res) {
    const auto origin = req.get_header_value("Origin");
    if (origin_allowed(origin, allowed)) {
      res.set_header("Access-Control-Allow-Origin", origin);
      res.set_header("Vary", "Origin");
    }
  });
  svr.Options(R"(/api/v1/.*)", [allowed](const httplib::Request& req, httplib::Response& res) {
    const auto origin = req.get_header_value("Origin");
    if (origin_allowed(origin, allowed)) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
    }
    res.status = 204;
  });
  svr.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    if (res.status == 404) {
      send_error(res, {ApiErrorCode::kNotFound, "no route for " + req.path});
    } else {
      const int status = res.status;
      send_error(res, {status >= 500 ? ApiErrorCode::kInternal : ApiErrorCode::kBadRequest,
                       "HTTP " + std::to_string(status)});
      res.status = status;
    }
  });

  svr.Get("/api/v1/session", [&session](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { res.set_content(session.describe().dump(2) + "\n", kJson); });
  });

  svr.Get(R"(/api/v1/snapshots/([0-9]+))",
          [&session](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
              res.set_content(session::export_snapshot(*find_snapshot(session, req)), kJson);
            });
          });

  svr.Get(R"(/api/v1/snapshots/([0-9]+)/biplot\.svg)",
          [&session](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
              res.set_content(render::render_biplot(*find_snapshot(session, req)),
                              "image/svg+xml");
            });
          });

  svr.Post("/api/v1/session/iterations",
           [&session](const httplib::Request& req, httplib::Response& res) {
             guarded(res, [&] {
               const auto body = parse_body(req, {"exclusions", "replace"});
               const auto exclusions = string_list(body, "exclusions");
               bool replace = false;
               if (body.contains("replace")) {
                 if (!body["replace"].is_boolean()) throw bad_request("replace must be a boolean");
                 replace = body["replace"].get<bool>();
               }
               // Exclusions branch from the latest snapshot unless replaced.
               const auto snap = (replace || !session.latest())
                                     ? session.run_iteration(exclusions)
                                     : session.exclude_and_rerun(exclusions);
               res.status = 201;
               res.set_header("Location",
                              "/api/v1/snapshots/" + std::to_string(snap->sequence_number));
               res.set_content(session::export_snapshot(*snap), kJson);
             });
           });

  svr.Put("/api/v1/session/terms", [&session](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto body = parse_body(req, {"add", "remove"});
      const auto rec = session.revise_terms(string_list(body, "add"), string_list(body, "remove"));
      res.set_content(session::to_json(rec).dump(2) + "\n", kJson);
    });
  });

  std::weak_ptr<EventBroker> weak = broker_;
  svr.Get("/api/v1/events", [weak](const httplib::Request&, httplib::Response& res) {
    auto broker = weak.lock();
    if (!broker) {
      send_error(res, {ApiErrorCode::kInternal, "event stream closed"});
      return;
    }
    auto sub = broker->subscribe();
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider(
        "text/event-stream",
        [sub, opened = false](std::size_t, httplib::DataSink& sink) mutable {
          if (!opened) {
            // Flushes headers so clients see the stream open at once.
            opened = true;
            const std::string hello = ": connected\n\n";
            return sink.write(hello.data(), hello.size());
          }
          if (sub->closed()) {
            sink.done();
            return true;
          }
          auto ev = sub->next(std::chrono::milliseconds(1000));
          const std::string chunk = ev ? format_sse(*ev) : std::string(": keepalive\n\n");
          if (!sink.is_writable() || !sink.write(chunk.data(), chunk.size())) return false;
          return true;
        },
        [weak, sub](bool) {
          if (auto b = weak.lock()) b->unsubscribe(sub);
        });
  });
}

int ApiServer::bind() {
  // httplib defaults to SO_REUSEPORT, which lets a second server share a
  // busy port silently. SO_REUSEADDR alone still allows quick restarts.
  http_->set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  int port = options_.port;
  if (port == 0) {
    port = http_->bind_to_any_port(options_.host);
  } else if (!http_->bind_to_port(options_.host, port)) {
    port = -1;
  }
  if (port < 0) {
    throw Error(ErrorKind::kInvalidArgument,
                "cannot bind " + options_.host + ":" + std::to_string(options_.port));
  }
  port_ = port;
  return port;
}

int ApiServer::start() {
  const int port = bind();
  thread_ = std::thread([this] { http_->listen_after_bind(); });
  http_->wait_until_ready();
  return port;
}

void ApiServer::run() {
  bind();
  http_->listen_after_bind();
}

void ApiServer::stop() {
  broker_->close();
  if (http_) http_->stop();
  if (thread_.joinable()) thread_.join();
}

void ApiServer::publish_cycle(const ingest::CycleReport& report) {
  broker_->publish("cycle", report.to_json().dump());
}

}  // namespace narrascope::server
