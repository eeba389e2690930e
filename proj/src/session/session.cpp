#include "narrascope/session/session.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "narrascope/error.hpp"
#include "narrascope/ingest/post_store.hpp"
#include "narrascope/session/snapshot_json.hpp"

namespace narrascope::session {
namespace fs = std::filesystem;

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kStorageFailure, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TermRevisionRecord record_from_json(const nlohmann::json& j) {
  TermRevisionRecord r;
  r.revision = j.at("revision").get<std::uint64_t>();
  r.terms = j.at("terms").get<std::vector<std::string>>();
  r.added = j.value("added", std::vector<std::string>{});
  r.removed = j.value("removed", std::vector<std::string>{});
  r.changed = j.value("changed", true);
  return r;
}

}  // namespace

nlohmann::ordered_json to_json(const TermRevisionRecord& record) {
  nlohmann::ordered_json j;
  j["revision"] = record.revision;
  j["terms"] = record.terms;
  j["added"] = record.added;
  j["removed"] = record.removed;
  j["changed"] = record.changed;
  return j;
}

fs::path snapshot_file(const fs::path& dir, std::uint64_t sequence_number) {
  char name[32];
  std::snprintf(name, sizeof name, "%04llu.json",
                static_cast<unsigned long long>(sequence_number));
  return dir / "snapshots" / name;
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorKind::kStorageFailure, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    throw Error(ErrorKind::kStorageFailure,
                "cannot rename " + tmp.string() + ": " + ec.message());
  }
}

Session::Session(fs::path dir, SessionConfig config,
                 std::shared_ptr<const text::PosAnnotator> annotator)
    : dir_(std::move(dir)), config_(std::move(config)), annotator_(std::move(annotator)) {}

std::unique_ptr<Session> Session::open(const fs::path& dir, SessionConfig config,
                                       std::span<const std::string> initial_terms,
                                       std::shared_ptr<const text::PosAnnotator> annotator) {
  config.validate();
  if (!annotator) annotator = text::make_annotator(config.tagger);
  std::error_code ec;
  fs::create_directories(dir / "snapshots", ec);
  if (ec) {
    throw Error(ErrorKind::kStorageFailure,
                "cannot create session directory " + dir.string() + ": " + ec.message());
  }
  std::unique_ptr<Session> s(new Session(dir, std::move(config), std::move(annotator)));

  const fs::path meta = dir / "session.json";
  if (fs::exists(meta)) {
    try {
      const auto j = nlohmann::json::parse(read_text(meta));
      for (const auto& r : j.at("term_revisions")) {
        s->term_history_.push_back(record_from_json(r));
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kStorageFailure,
                  "corrupt " + meta.string() + ": " + e.what());
    }
  }
  if (!s->term_history_.empty()) {
    const auto& last = s->term_history_.back();
    s->terms_ = std::make_shared<ingest::TermsProvider>(ingest::SearchTermSet::create(
        s->config_.event_name, last.terms, last.revision));
  } else if (!initial_terms.empty()) {
    auto set = ingest::SearchTermSet::create(s->config_.event_name, initial_terms);
    s->term_history_.push_back({set.revision(), set.terms(), set.terms(), {}, true});
    s->terms_ = std::make_shared<ingest::TermsProvider>(std::move(set));
  }

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir / "snapshots")) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  for (const auto& f : files) {
    s->snapshots_.push_back(std::make_shared<const AnalysisSnapshot>(
        import_snapshot(read_text(f))));
  }
  std::sort(s->snapshots_.begin(), s->snapshots_.end(),
            [](const SnapshotPtr& a, const SnapshotPtr& b) {
              return a->sequence_number < b->sequence_number;
            });

  s->persist_session_locked();
  return s;
}

void Session::persist_session_locked() const {
  nlohmann::ordered_json j;
  j["schema_version"] = "1";
  j["config"] = to_json(config_);
  j["term_revisions"] = nlohmann::ordered_json::array();
  for (const auto& r : term_history_) j["term_revisions"].push_back(to_json(r));
  write_file_atomic(dir_ / "session.json", j.dump(2) + "\n");
}

SnapshotPtr Session::run_iteration(std::span<const std::string> exclusions) {
  std::unique_lock writer(writer_mu_);
  const auto posts = ingest::read_store(config_.store_path);
  auto snap = analyze_posts(posts, params_of(config_), normalize_exclusions(exclusions),
                            *annotator_);
  auto recorded = record(std::move(snap));
  writer.unlock();

  std::vector<SnapshotListener> listeners;
  {
    std::lock_guard lock(listener_mu_);
    listeners = listeners_;
  }
  for (const auto& l : listeners) l(*recorded);
  return recorded;
}

SnapshotPtr Session::record(AnalysisSnapshot snap) {
  snap.sequence_number = latest_sequence() + 1;
  write_file_atomic(snapshot_file(dir_, snap.sequence_number), export_snapshot(snap));
  auto ptr = std::make_shared<const AnalysisSnapshot>(std::move(snap));
  std::unique_lock lock(state_mu_);
  snapshots_.push_back(ptr);
  return ptr;
}

SnapshotPtr Session::exclude_and_rerun(std::span<const std::string> terms) {
  const auto prior = latest();
  if (!prior) {
    throw Error(ErrorKind::kInvalidArgument,
                "exclude_and_rerun needs at least one prior snapshot");
  }
  std::vector<std::string> merged(prior->exclusions_in_effect.begin(),
                                  prior->exclusions_in_effect.end());
  merged.insert(merged.end(), terms.begin(), terms.end());
  return run_iteration(merged);
}

TermRevisionRecord Session::revise_terms(std::span<const std::string> add,
                                         std::span<const std::string> remove) {
  std::lock_guard writer(writer_mu_);
  TermRevisionRecord rec;
  std::shared_ptr<ingest::TermsProvider> provider;
  {
    std::shared_lock lock(state_mu_);
    provider = terms_;
  }
  if (!provider) {
    auto set = ingest::SearchTermSet::create(config_.event_name, add);
    rec = {set.revision(), set.terms(), set.terms(), {}, true};
    provider = std::make_shared<ingest::TermsProvider>(std::move(set));
  } else {
    const auto rev = provider->revise(add, remove);
    rec = {rev.revision, provider->current().terms(), rev.added, rev.removed, rev.changed};
  }
  std::unique_lock lock(state_mu_);
  terms_ = provider;
  term_history_.push_back(rec);
  persist_session_locked();
  return rec;
}

std::vector<SnapshotPtr> Session::snapshots() const {
  std::shared_lock lock(state_mu_);
  return snapshots_;
}

SnapshotPtr Session::snapshot(std::uint64_t sequence_number) const {
  std::shared_lock lock(state_mu_);
  for (const auto& s : snapshots_) {
    if (s->sequence_number == sequence_number) return s;
  }
  return nullptr;
}

SnapshotPtr Session::latest() const {
  std::shared_lock lock(state_mu_);
  return snapshots_.empty() ? nullptr : snapshots_.back();
}

std::uint64_t Session::latest_sequence() const {
  const auto l = latest();
  return l ? l->sequence_number : 0;
}

std::vector<TermRevisionRecord> Session::term_history() const {
  std::shared_lock lock(state_mu_);
  return term_history_;
}

std::shared_ptr<ingest::TermsProvider> Session::terms_provider() const {
  std::shared_lock lock(state_mu_);
  return terms_;
}

void Session::add_listener(SnapshotListener listener) {
  std::lock_guard lock(listener_mu_);
  listeners_.push_back(std::move(listener));
}

nlohmann::ordered_json Session::describe() const {
  nlohmann::ordered_json j;
  j["config"] = to_json(config_);
  std::shared_lock lock(state_mu_);
  j["term_revisions"] = nlohmann::ordered_json::array();
  for (const auto& r : term_history_) j["term_revisions"].push_back(to_json(r));
  j["latest_sequence_number"] =
      snapshots_.empty() ? nlohmann::ordered_json(nullptr)
                         : nlohmann::ordered_json(snapshots_.back()->sequence_number);
  j["snapshot_count"] = snapshots_.size();
  return j;
}

}  // namespace narrascope::session
