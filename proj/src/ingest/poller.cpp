#include "narrascope/ingest/poller.hpp"

namespace narrascope::ingest {

SearchTermSet TermsProvider::current() const {
  std::lock_guard lock(mu_);
  return terms_;
}

SearchTermSet::Revision TermsProvider::revise(
    std::span<const std::string> add, std::span<const std::string> remove) {
  std::lock_guard lock(mu_);
  return terms_.revise(add, remove);
}

nlohmann::ordered_json CycleReport::to_json() const {
  nlohmann::ordered_json j;
  j["cycle"] = cycle;
  j["terms_revision"] = terms_revision;
  j["active_terms"] = active_terms;
  j["fetched"] = fetched;
  j["appended"] = appended;
  j["malformed"] = malformed;
  j["store_count"] = store_count;
  if (error) {
    j["error"] = {{"kind", std::string(to_string(*error))},
                  {"message", error_message}};
  } else {
    j["error"] = nullptr;
  }
  return j;
}

Poller::Poller(Source& source, TermsProvider& terms, PostStore& store,
               PollerOptions options, ReportSink sink)
    : source_(source),
      terms_(terms),
      store_(store),
      options_(options),
      sink_(std::move(sink)) {}

Poller::~Poller() {
  stop();
  if (thread_.joinable()) thread_.join();
}

CycleReport Poller::run_cycle() {
  const SearchTermSet terms = terms_.current();
  CycleReport report;
  {
    std::lock_guard lock(mu_);
    report.cycle = ++cycles_;
  }
  report.terms_revision = terms.revision();
  report.active_terms = terms.terms();
  try {
    PollResult polled = poll_once(source_, terms, store_.cursors());
    report.fetched = polled.batch.size();
    report.malformed = polled.malformed;
    report.diagnostics = std::move(polled.diagnostics);
    report.appended = store_.dedup_append(polled.batch);
    store_.save_cursors(polled.cursors);
  } catch (const Error& e) {
    report.error = e.kind();
    report.error_message = e.what();
    if (e.kind() == ErrorKind::kStorageFailure) {
      std::lock_guard lock(mu_);
      fatal_ = e.what();
    }
  }
  report.store_count = store_.count();
  if (sink_) sink_(report);
  return report;
}

void Poller::start() {
  std::lock_guard lock(mu_);
  if (thread_.joinable()) return;
  stop_requested_ = false;
  finished_ = false;
  thread_ = std::thread([this] { loop(); });
}

void Poller::stop() {
  {
    std::lock_guard lock(mu_);
    stop_requested_ = true;
  }
  cv_.notify_all();
}

void Poller::wait() {
  {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [this] { return finished_ || !thread_.joinable(); });
  }
  if (thread_.joinable()) thread_.join();
}

std::optional<std::string> Poller::fatal_error() const {
  std::lock_guard lock(mu_);
  return fatal_;
}

std::uint64_t Poller::cycles_run() const {
  std::lock_guard lock(mu_);
  return cycles_;
}

void Poller::loop() {
  for (;;) {
    run_cycle();
    std::unique_lock lock(mu_);
    const bool done =
        stop_requested_ || fatal_.has_value() ||
        (options_.max_cycles != 0 && cycles_ >= options_.max_cycles);
    if (done) break;
    if (options_.stop_when_exhausted) {
      lock.unlock();
      bool dry = false;
      try {
        dry = source_.exhausted(store_.cursors());
      } catch (const Error&) {
        dry = false;
      }
      lock.lock();
      if (dry) break;
    }
    if (options_.interval.count() > 0) {
      cv_.wait_for(lock, options_.interval, [this] { return stop_requested_; });
    }
    if (stop_requested_) break;
  }
  std::lock_guard lock(mu_);
  finished_ = true;
  cv_.notify_all();
}

}  // namespace narrascope::ingest
