#include <httplib.h>

#include <atomic>
#include <chrono>
#include <thread>

#include "doctest.h"
#include "narrascope/ingest/post_store.hpp"
#include "narrascope/render/render.hpp"
#include "narrascope/server/api.hpp"
#include "narrascope/server/events.hpp"
#include "narrascope/session/session.hpp"
#include "narrascope/session/snapshot_json.hpp"
#include "narrascope/synth/synth.hpp"
#include "support/support.hpp"

using namespace narrascope::server;
using narrascope::ErrorKind;
using narrascope::session::Session;
using nlohmann::json;
using V = std::vector<std::string>;
using namespace std::chrono_literals;

namespace {

struct Harness {
  testsupport::TempDir dir;
  std::unique_ptr<Session> session;
  std::unique_ptr<ApiServer> server;
  int port = 0;

  explicit Harness(bool with_posts, ServerOptions options = {}) {
    const auto store = dir / "store.jsonl";
    {
      auto s = narrascope::ingest::PostStore::open(store);
      if (with_posts) {
        s.dedup_append(narrascope::synth::generate(narrascope::synth::load_scenario(
            testsupport::fixture("fixtures/scenarios/two_narratives.json"))));
      }
    }
    narrascope::session::SessionConfig cfg;
    cfg.event_name = "debate";
    cfg.store_path = store;
    session = Session::open(dir / "session", cfg, V{"trump", "pence"});
    options.port = 0;
    server = std::make_unique<ApiServer>(*session, options);
    port = server->start();
  }

  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port);
    c.set_read_timeout(10, 0);
    return c;
  }
};

json body_of(const httplib::Result& r) { return json::parse(r->body); }

void check_error(const httplib::Result& r, int status, const std::string& code) {
  REQUIRE(r);
  CHECK(r->status == status);
  CHECK(r->get_header_value("Content-Type").find("application/json") == 0);
  const auto j = body_of(r);
  CHECK(j.at("error").at("code") == code);
  CHECK(j.at("error").at("message").is_string());
}

}  // namespace

TEST_CASE("every error kind maps to one code") {
  CHECK(classify(ErrorKind::kInsufficientVocabulary) == ApiErrorCode::kNotEnoughData);
  CHECK(classify(ErrorKind::kDegenerateTable) == ApiErrorCode::kDegenerateTable);
  CHECK(classify(ErrorKind::kInvalidArgument) == ApiErrorCode::kBadRequest);
  CHECK(classify(ErrorKind::kEmptyTermSet) == ApiErrorCode::kBadRequest);
  CHECK(classify(ErrorKind::kInvalidSpec) == ApiErrorCode::kBadRequest);
  CHECK(classify(ErrorKind::kMalformedRecord) == ApiErrorCode::kBadRequest);
  CHECK(classify(ErrorKind::kNotFound) == ApiErrorCode::kNotFound);
  CHECK(classify(ErrorKind::kStorageFailure) == ApiErrorCode::kInternal);
  CHECK(classify(ErrorKind::kSourceUnavailable) == ApiErrorCode::kInternal);
  CHECK(classify(ErrorKind::kTaggerFailure) == ApiErrorCode::kInternal);
  CHECK(classify(ErrorKind::kConvergenceFailure) == ApiErrorCode::kInternal);
  CHECK(http_status(ApiErrorCode::kNotEnoughData) == 422);
  CHECK(http_status(ApiErrorCode::kDegenerateTable) == 422);
  CHECK(http_status(ApiErrorCode::kBadRequest) == 400);
  CHECK(http_status(ApiErrorCode::kNotFound) == 404);
  CHECK(http_status(ApiErrorCode::kInternal) == 500);
  CHECK(to_string(ApiErrorCode::kNotEnoughData) == "NOT_ENOUGH_DATA");
  const auto e = to_api_error(narrascope::Error(ErrorKind::kDegenerateTable, "2 rows"));
  CHECK(e.message == "not enough data yet: 2 rows");
  CHECK(e.to_json().dump() == R"({"error":{"code":"DEGENERATE_TABLE","message":"not enough data yet: 2 rows"}})");
}

TEST_CASE("origin policy") {
  CHECK(origin_allowed("http://localhost:5173", ""));
  CHECK(origin_allowed("http://127.0.0.1", ""));
  CHECK(origin_allowed("https://[::1]:8443", ""));
  CHECK_FALSE(origin_allowed("http://localhost.evil.com", ""));
  CHECK_FALSE(origin_allowed("http://example.com", ""));
  CHECK_FALSE(origin_allowed("", ""));
  CHECK(origin_allowed("https://dash.example", "https://dash.example"));
  CHECK_FALSE(origin_allowed("http://localhost:5173", "https://dash.example"));
  CHECK(origin_allowed("http://anything", "*"));
}

TEST_CASE("SSE wire format") {
  CHECK(format_sse({7, "snapshot", R"({"a":1})"}) == "id: 7\nevent: snapshot\ndata: {\"a\":1}\n\n");
  CHECK(format_sse({8, "cycle", "x\ny"}) == "id: 8\nevent: cycle\ndata: x\ndata: y\n\n");
}

TEST_CASE("broker fan-out drops the oldest events for slow readers") {
  EventBroker broker;
  auto a = broker.subscribe();
  auto b = broker.subscribe();
  CHECK(broker.subscriber_count() == 2);
  for (int i = 0; i < 300; ++i) broker.publish("cycle", std::to_string(i));
  CHECK(a->dropped() == 44);
  const auto first = a->next(10ms);
  REQUIRE(first);
  CHECK(first->data == "44");
  CHECK(first->id == 45);
  CHECK(b->next(10ms)->data == "44");
  broker.unsubscribe(b);
  CHECK(broker.subscriber_count() == 1);
  std::thread closer([&] {
    std::this_thread::sleep_for(50ms);
    broker.close();
  });
  while (a->next(5s)) {
  }
  closer.join();
  CHECK(a->closed());
  CHECK(broker.subscribe()->closed());
}

TEST_CASE("session endpoint on an empty store and the not-enough-data path") {
  Harness h(false);
  auto c = h.client();
  auto r = c.Get("/api/v1/session");
  REQUIRE(r);
  CHECK(r->status == 200);
  auto j = body_of(r);
  CHECK(j.at("config").at("event_name") == "debate");
  CHECK(j.at("latest_sequence_number").is_null());
  CHECK(j.at("snapshot_count") == 0);
  CHECK(j.at("term_revisions").size() == 1);

  r = c.Post("/api/v1/session/iterations", "{}", "application/json");
  check_error(r, 422, "NOT_ENOUGH_DATA");
  CHECK(body_of(r)["error"]["message"].get<std::string>().rfind("not enough data yet", 0) == 0);
  check_error(c.Get("/api/v1/snapshots/1"), 404, "NOT_FOUND");
}

TEST_CASE("iterations, snapshots and biplots") {
  Harness h(true);
  auto c = h.client();
  auto r = c.Post("/api/v1/session/iterations", "", "application/json");
  REQUIRE(r);
  CHECK(r->status == 201);
  CHECK(r->get_header_value("Location") == "/api/v1/snapshots/1");
  const auto first = h.session->snapshot(1);
  REQUIRE(first);
  CHECK(r->body == narrascope::session::export_snapshot(*first));

  r = c.Post("/api/v1/session/iterations", R"({"exclusions":["cage","build"]})",
             "application/json");
  REQUIRE(r);
  CHECK(r->status == 201);
  auto j = body_of(r);
  CHECK(j.at("sequence_number") == 2);
  CHECK(j.at("exclusions_in_effect") == json::array({"build", "cage"}));
  CHECK(j.at("candidates").at(0).at("verb") == "lie");
  CHECK(j.at("candidates").at(0).at("noun") == "trump");

  r = c.Post("/api/v1/session/iterations", R"({"exclusions":["hoax"]})", "application/json");
  CHECK(body_of(r).at("exclusions_in_effect") == json::array({"build", "cage", "hoax"}));
  r = c.Post("/api/v1/session/iterations", R"({"exclusions":["hoax"],"replace":true})",
             "application/json");
  CHECK(body_of(r).at("exclusions_in_effect") == json::array({"hoax"}));

  r = c.Get("/api/v1/snapshots/2");
  REQUIRE(r);
  CHECK(r->status == 200);
  CHECK(r->body == narrascope::session::export_snapshot(*h.session->snapshot(2)));
  // GET is a pure function of persisted state.
  CHECK(c.Get("/api/v1/snapshots/2")->body == r->body);
  CHECK(r->body == testsupport::slurp(narrascope::session::snapshot_file(h.dir / "session", 2)));

  r = c.Get("/api/v1/snapshots/1/biplot.svg");
  REQUIRE(r);
  CHECK(r->status == 200);
  CHECK(r->get_header_value("Content-Type").find("image/svg+xml") == 0);
  CHECK(r->body == narrascope::render::render_biplot(*first));
  check_error(c.Get("/api/v1/snapshots/99/biplot.svg"), 404, "NOT_FOUND");
  check_error(c.Get("/api/v1/snapshots/99"), 404, "NOT_FOUND");

  j = body_of(c.Get("/api/v1/session"));
  CHECK(j.at("latest_sequence_number") == 4);
  CHECK(j.at("snapshot_count") == 4);
}

TEST_CASE("bad request bodies") {
  Harness h(true);
  auto c = h.client();
  check_error(c.Post("/api/v1/session/iterations", "not json", "application/json"), 400,
              "BAD_REQUEST");
  check_error(c.Post("/api/v1/session/iterations", R"({"exclusionz":[]})", "application/json"),
              400, "BAD_REQUEST");
  check_error(c.Post("/api/v1/session/iterations", R"({"exclusions":"cage"})", "application/json"),
              400, "BAD_REQUEST");
  check_error(c.Post("/api/v1/session/iterations", R"({"exclusions":[1]})", "application/json"),
              400, "BAD_REQUEST");
  check_error(c.Post("/api/v1/session/iterations", R"([1])", "application/json"), 400,
              "BAD_REQUEST");
  check_error(c.Put("/api/v1/session/terms", R"({"add":"fly"})", "application/json"), 400,
              "BAD_REQUEST");
  check_error(c.Put("/api/v1/session/terms", R"({"add":[],"drop":[]})", "application/json"), 400,
              "BAD_REQUEST");
  check_error(c.Get("/api/v1/nothing"), 404, "NOT_FOUND");
  CHECK(h.session->snapshots().empty());
}

TEST_CASE("term revisions") {
  Harness h(false);
  auto c = h.client();
  auto r = c.Put("/api/v1/session/terms", R"({"add":["fly"]})", "application/json");
  REQUIRE(r);
  CHECK(r->status == 200);
  auto j = body_of(r);
  CHECK(j.at("terms") == json::array({"trump", "pence", "fly"}));
  CHECK(j.at("added") == json::array({"fly"}));
  CHECK(j.at("changed") == true);
  check_error(c.Put("/api/v1/session/terms", R"({"remove":["trump","pence","fly"]})",
                    "application/json"),
              400, "BAD_REQUEST");
  j = body_of(c.Get("/api/v1/session"));
  CHECK(j.at("term_revisions").size() == 2);
  CHECK(h.session->terms_provider()->current().contains("fly"));
}

TEST_CASE("CORS headers and preflight") {
  SUBCASE("default localhost policy") {
    Harness h(false);
    auto c = h.client();
    auto r = c.Get("/api/v1/session", {{"Origin", "http://localhost:5173"}});
    REQUIRE(r);
    CHECK(r->get_header_value("Access-Control-Allow-Origin") == "http://localhost:5173");
    r = c.Get("/api/v1/session", {{"Origin", "http://evil.example"}});
    CHECK_FALSE(r->has_header("Access-Control-Allow-Origin"));
    r = c.Options("/api/v1/session/iterations",
                  {{"Origin", "http://127.0.0.1:3000"}, {"Access-Control-Request-Method", "POST"}});
    REQUIRE(r);
    CHECK(r->status == 204);
    CHECK(r->get_header_value("Access-Control-Allow-Methods").find("POST") != std::string::npos);
    CHECK(r->get_header_value("Access-Control-Allow-Origin") == "http://127.0.0.1:3000");
  }
  SUBCASE("configured origin") {
    ServerOptions o;
    o.allowed_origin = "https://dash.example";
    Harness h(false, o);
    auto c = h.client();
    auto r = c.Get("/api/v1/session", {{"Origin", "https://dash.example"}});
    CHECK(r->get_header_value("Access-Control-Allow-Origin") == "https://dash.example");
    r = c.Get("/api/v1/session", {{"Origin", "http://localhost:5173"}});
    CHECK_FALSE(r->has_header("Access-Control-Allow-Origin"));
  }
}

TEST_CASE("event stream delivers snapshot events within a second") {
  Harness h(true);
  std::mutex mu;
  std::string received;
  std::atomic<bool> stop{false};
  std::thread reader([&] {
    httplib::Client c("127.0.0.1", h.port);
    c.set_read_timeout(10, 0);
    auto r = c.Get("/api/v1/events", [&](const char* data, std::size_t len) {
      std::lock_guard lock(mu);
      received.append(data, len);
      return !stop.load();
    });
  });
  auto wait_for = [&](const std::string& needle, std::chrono::milliseconds limit) {
    const auto deadline = std::chrono::steady_clock::now() + limit;
    while (std::chrono::steady_clock::now() < deadline) {
      {
        std::lock_guard lock(mu);
        if (received.find(needle) != std::string::npos) return true;
      }
      std::this_thread::sleep_for(2ms);
    }
    return false;
  };
  REQUIRE(wait_for(": connected", 5s));

  auto c = h.client();
  REQUIRE(c.Post("/api/v1/session/iterations", "{}", "application/json")->status == 201);
  const auto created = std::chrono::steady_clock::now();
  CHECK(wait_for("event: snapshot", 1s));
  CHECK(std::chrono::steady_clock::now() - created < 1s);

  narrascope::ingest::CycleReport report;
  report.cycle = 3;
  report.store_count = 1000;
  h.server->publish_cycle(report);
  CHECK(wait_for("event: cycle", 1s));

  {
    std::lock_guard lock(mu);
    const auto at = received.find("event: snapshot\ndata: ");
    REQUIRE(at != std::string::npos);
    const auto start = at + std::string("event: snapshot\ndata: ").size();
    const auto data = json::parse(received.substr(start, received.find('\n', start) - start));
    CHECK(data.at("sequence_number") == 1);
    CHECK(data.at("url") == "/api/v1/snapshots/1");
    CHECK(data.at("post_count") == 1000);
  }
  stop = true;
  // One more event so the reader's callback sees the stop flag.
  h.server->publish_cycle(report);
  reader.join();
}

TEST_CASE("stopping the server ends open streams") {
  Harness h(false);
  std::atomic<bool> ended{false};
  std::thread reader([&] {
    httplib::Client c("127.0.0.1", h.port);
    c.Get("/api/v1/events", [&](const char*, std::size_t) { return true; });
    ended = true;
  });
  const auto deadline = std::chrono::steady_clock::now() + 5s;
  while (h.server->events().subscriber_count() == 0 && std::chrono::steady_clock::now() < deadline) {
    std::this_thread::sleep_for(5ms);
  }
  CHECK(h.server->events().subscriber_count() == 1);
  h.server->stop();
  reader.join();
  CHECK(ended);
}

TEST_CASE("binding a busy port fails with InvalidArgument") {
  Harness h(false);
  ServerOptions o;
  o.port = h.port;
  ApiServer second(*h.session, o);
  CHECK(testsupport::error_kind([&] { second.start(); }) == ErrorKind::kInvalidArgument);
}
