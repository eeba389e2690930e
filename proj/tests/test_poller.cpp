#include <atomic>
#include <chrono>
#include <mutex>

#include "doctest.h"
#include "narrascope/error.hpp"
#include "narrascope/ingest/poller.hpp"
#include "support/support.hpp"

using namespace narrascope;
using namespace narrascope::ingest;
using namespace std::chrono_literals;

namespace {

std::string raw(int i, const std::string& text) {
  nlohmann::ordered_json j;
  j["id"] = "r" + std::to_string(i);
  j["created_at"] = "2020-10-07T21:14:03Z";
  j["text"] = text;
  return j.dump() + "\n";
}

// Source whose polls fail on request; otherwise returns one new post.
class FlakySource final : public Source {
 public:
  std::atomic<int> fail_cycles{0};
  std::atomic<int> polls{0};

  PollResult poll(std::span<const std::string> terms, const CursorMap& cursors) override {
    const int n = ++polls;
    if (fail_cycles > 0) {
      --fail_cycles;
      throw Error(ErrorKind::kSourceUnavailable, "endpoint down");
    }
    PollResult r;
    r.cursors = cursors;
    r.batch.push_back(testsupport::make_post("live-" + std::to_string(n), terms.front() + " news",
                                             {terms.front()}));
    r.batch.back().source = "live";
    return r;
  }
  std::string_view kind() const override { return "test"; }
};

}  // namespace

TEST_CASE("replay poller drains a 100-record fixture") {
  testsupport::TempDir dir;
  std::string body;
  int expected = 0;
  for (int i = 0; i < 100; ++i) {
    const bool match = i % 3 == 0;
    expected += match;
    body += raw(i, match ? "a fly on pence" : "nothing to see");
  }
  body += raw(0, "a fly duplicate id");  // duplicate id is ignored
  testsupport::spit(dir / "in.jsonl", body);

  ReplaySource src(dir / "in.jsonl", 7);
  TermsProvider terms(SearchTermSet::create("vp", std::vector<std::string>{"fly"}));
  auto store = PostStore::open(dir / "s.jsonl");
  std::vector<CycleReport> reports;
  Poller poller(src, terms, store, {0ms, true, 0},
                [&](const CycleReport& r) { reports.push_back(r); });
  poller.start();
  poller.wait();
  CHECK(store.count() == static_cast<std::size_t>(expected));
  CHECK(reports.size() == 15);  // ceil(101 / 7)
  CHECK_FALSE(poller.fatal_error().has_value());
  CHECK(reports.back().store_count == static_cast<std::size_t>(expected));
  // Cursors were persisted for resumption.
  CHECK(store.cursors().at("fly") == "line:101");
}

TEST_CASE("two replays into fresh stores are byte-identical") {
  testsupport::TempDir dir;
  std::string body;
  for (int i = 0; i < 60; ++i) body += raw(i, i % 2 ? "fly " + std::to_string(i) : "Pence " + std::to_string(i));
  testsupport::spit(dir / "in.jsonl", body);
  for (const char* name : {"a.jsonl", "b.jsonl"}) {
    ReplaySource src(dir / "in.jsonl", 9);
    TermsProvider terms(SearchTermSet::create("vp", std::vector<std::string>{"fly", "pence"}));
    auto store = PostStore::open(dir / name);
    Poller poller(src, terms, store, {0ms, true, 0});
    poller.start();
    poller.wait();
  }
  CHECK(testsupport::slurp(dir / "a.jsonl") == testsupport::slurp(dir / "b.jsonl"));
  CHECK(testsupport::slurp(dir / "a.jsonl").size() > 0);
}

TEST_CASE("every stored post satisfies the matching rule") {
  testsupport::TempDir dir;
  testsupport::spit(dir / "in.jsonl", raw(1, "#VPDebate fly") + raw(2, "Vice President Pence") +
                                          raw(3, "butterfly") + raw(4, "@mike_pence speaks"));
  const std::vector<std::string> list = {"#vpdebate", "vice president", "fly", "@Mike_Pence"};
  ReplaySource src(dir / "in.jsonl");
  TermsProvider terms(SearchTermSet::create("vp", list));
  auto store = PostStore::open(dir / "s.jsonl");
  Poller poller(src, terms, store, {0ms, true, 0});
  poller.run_cycle();
  const auto posts = read_store(dir / "s.jsonl");
  CHECK(posts.size() == 3);
  for (const auto& p : posts) {
    for (const auto& t : p.matched_terms) CHECK(term_matches(t, p.text));
  }
}

TEST_CASE("term revisions land on the next cycle") {
  testsupport::TempDir dir;
  FlakySource src;
  TermsProvider terms(SearchTermSet::create("vp", std::vector<std::string>{"pence"}));
  auto store = PostStore::open(dir / "s.jsonl");
  Poller poller(src, terms, store, {0ms, false, 0});
  auto r1 = poller.run_cycle();
  CHECK(r1.active_terms == std::vector<std::string>{"pence"});
  CHECK(r1.terms_revision == 1);
  const std::vector<std::string> fly = {"fly"};
  const std::vector<std::string> none;
  terms.revise(fly, none);
  auto r2 = poller.run_cycle();
  CHECK(r2.active_terms == std::vector<std::string>{"pence", "fly"});
  CHECK(r2.terms_revision == 2);
}

TEST_CASE("a failing cycle is reported and the next one proceeds") {
  testsupport::TempDir dir;
  FlakySource src;
  src.fail_cycles = 1;
  TermsProvider terms(SearchTermSet::create("vp", std::vector<std::string>{"pence"}));
  auto store = PostStore::open(dir / "s.jsonl");
  std::mutex mu;
  std::vector<CycleReport> reports;
  Poller poller(src, terms, store, {1ms, false, 3}, [&](const CycleReport& r) {
    std::lock_guard lock(mu);
    reports.push_back(r);
  });
  poller.start();
  poller.wait();
  REQUIRE(reports.size() == 3);
  CHECK(reports[0].error == ErrorKind::kSourceUnavailable);
  CHECK(reports[0].to_json()["error"]["kind"] == std::string(to_string(ErrorKind::kSourceUnavailable)));
  CHECK_FALSE(reports[1].error.has_value());
  CHECK(reports[1].appended == 1);
  CHECK(store.count() == 2);
}

TEST_CASE("stop interrupts a long interval promptly") {
  testsupport::TempDir dir;
  FlakySource src;
  TermsProvider terms(SearchTermSet::create("vp", std::vector<std::string>{"pence"}));
  auto store = PostStore::open(dir / "s.jsonl");
  Poller poller(src, terms, store, {std::chrono::hours(1), false, 0});
  poller.start();
  while (poller.cycles_run() < 1) std::this_thread::sleep_for(1ms);
  const auto t0 = std::chrono::steady_clock::now();
  poller.stop();
  poller.wait();
  CHECK(std::chrono::steady_clock::now() - t0 < 2s);
  CHECK(poller.cycles_run() == 1);
}
