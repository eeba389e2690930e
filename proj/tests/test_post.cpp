#include "doctest.h"
#include "narrascope/error.hpp"
#include "narrascope/ingest/post.hpp"
#include "support/support.hpp"

using namespace narrascope;
using namespace narrascope::ingest;

TEST_CASE("timestamps round trip at second precision") {
  const auto t = parse_timestamp("2020-10-07T21:14:03Z");
  CHECK(format_timestamp(t) == "2020-10-07T21:14:03Z");
  // 2020-10-07T21:14:03Z as Unix seconds, counted by hand from the epoch.
  const long long days = 18542;  // 1970-01-01 .. 2020-10-07
  CHECK(t.time_since_epoch().count() == days * 86400 + 21 * 3600 + 14 * 60 + 3);
  CHECK(format_timestamp(parse_timestamp("2000-02-29T00:00:00Z")) == "2000-02-29T00:00:00Z");
}

TEST_CASE("malformed timestamps are rejected") {
  for (const char* bad : {"2020-10-07 21:14:03Z", "2020-10-07T21:14:03", "2020-13-01T00:00:00Z",
                          "2021-02-29T00:00:00Z", "2020-10-07T24:00:00Z", "", "2020-10-07T21:14:03.5Z"}) {
    CAPTURE(bad);
    try {
      parse_timestamp(bad);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kMalformedRecord);
    }
  }
}

TEST_CASE("post JSON keeps field order and round trips") {
  const auto p = testsupport::make_post("42", "Trump lies \"again\" ✓", {"trump"});
  const auto line = to_jsonl_line(p);
  CHECK(line == "{\"id\":\"42\",\"created_at\":\"2020-10-07T12:00:00Z\",\"text\":\"Trump lies "
                "\\\"again\\\" ✓\",\"matched_terms\":[\"trump\"],\"source\":\"replay\"}\n");
  CHECK(post_from_json(nlohmann::json::parse(line)) == p);
}

TEST_CASE("post invariants") {
  auto ok = testsupport::make_post("1", "text", {"t"});
  CHECK_NOTHROW(validate(ok));
  auto p = ok;
  p.id = "";
  CHECK_THROWS_AS(validate(p), Error);
  p = ok;
  p.text = "   \t";
  CHECK_THROWS_AS(validate(p), Error);
  p = ok;
  p.matched_terms.clear();
  CHECK_THROWS_AS(validate(p), Error);
  p = ok;
  p.source = "scraped";
  CHECK_THROWS_AS(validate(p), Error);
}

TEST_CASE("strict parse rejects missing or mistyped fields") {
  const auto good = to_json(testsupport::make_post("1", "x", {"t"}));
  for (const char* key : {"id", "created_at", "text", "matched_terms", "source"}) {
    nlohmann::json j = nlohmann::json::parse(good.dump());
    j.erase(key);
    CAPTURE(key);
    CHECK_THROWS_AS(post_from_json(j), Error);
  }
  nlohmann::json j = nlohmann::json::parse(good.dump());
  j["matched_terms"] = "t";
  CHECK_THROWS_AS(post_from_json(j), Error);
}
