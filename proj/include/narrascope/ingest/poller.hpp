#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "narrascope/error.hpp"
#include "narrascope/ingest/post_store.hpp"
#include "narrascope/ingest/search_terms.hpp"
#include "narrascope/ingest/sources.hpp"
#include "json.hpp"

namespace narrascope::ingest {

// Thread-safe holder of the current search terms. The poller takes one
// consistent copy per cycle; revisions land on the next cycle.
class TermsProvider {
 public:
  explicit TermsProvider(SearchTermSet initial) : terms_(std::move(initial)) {}

  SearchTermSet current() const;
  SearchTermSet::Revision revise(std::span<const std::string> add,
                                 std::span<const std::string> remove);

 private:
  mutable std::mutex mu_;
  SearchTermSet terms_;
};

struct CycleReport {
  std::uint64_t cycle = 0;
  std::uint64_t terms_revision = 0;
  std::vector<std::string> active_terms;
  std::size_t fetched = 0;
  std::size_t appended = 0;
  std::size_t malformed = 0;
  std::size_t store_count = 0;
  std::optional<ErrorKind> error;
  std::string error_message;
  std::vector<std::string> diagnostics;

  nlohmann::ordered_json to_json() const;
};

struct PollerOptions {
  std::chrono::milliseconds interval{std::chrono::seconds(180)};
  // Stop once the source reports nothing further to read (replay).
  bool stop_when_exhausted = false;
  // 0 = unbounded.
  std::uint64_t max_cycles = 0;
};

// Repeated poll_once + dedup_append. Per-cycle errors are reported and the
// loop continues; only stop() or a StorageFailure ends it.
class Poller {
 public:
  using ReportSink = std::function<void(const CycleReport&)>;

  Poller(Source& source, TermsProvider& terms, PostStore& store,
         PollerOptions options, ReportSink sink = {});
  ~Poller();

  Poller(const Poller&) = delete;
  Poller& operator=(const Poller&) = delete;

  // One synchronous cycle (also what the background loop runs).
  CycleReport run_cycle();

  void start();
  void stop();
  // Blocks until the loop ends on its own or is stopped.
  void wait();

  // Set when the loop ended because of a StorageFailure.
  std::optional<std::string> fatal_error() const;
  std::uint64_t cycles_run() const;

 private:
  void loop();

  Source& source_;
  TermsProvider& terms_;
  PostStore& store_;
  PollerOptions options_;
  ReportSink sink_;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  bool stop_requested_ = false;
  bool finished_ = false;
  std::uint64_t cycles_ = 0;
  std::optional<std::string> fatal_;
  std::thread thread_;
};

}  // namespace narrascope::ingest
