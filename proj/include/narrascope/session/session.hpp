#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "narrascope/ingest/poller.hpp"
#include "narrascope/ingest/search_terms.hpp"
#include "narrascope/session/config.hpp"
#include "narrascope/session/pipeline.hpp"
#include "narrascope/text/annotator.hpp"
#include "json.hpp"

namespace narrascope::session {

struct TermRevisionRecord {
  std::uint64_t revision = 0;
  std::vector<std::string> terms;
  std::vector<std::string> added;
  std::vector<std::string> removed;
  bool changed = false;

  bool operator==(const TermRevisionRecord&) const = default;
};

nlohmann::ordered_json to_json(const TermRevisionRecord& record);

using SnapshotPtr = std::shared_ptr<const AnalysisSnapshot>;

// An analyst session backed by a directory:
//   session.json        config + search-term revision history
//   snapshots/NNNN.json one export per recorded snapshot
// Iterations are serialized; history reads never wait on a running
// analysis.
class Session {
 public:
  using SnapshotListener = std::function<void(const AnalysisSnapshot&)>;

  // Creates or reopens `dir`. `config` is persisted and used for future
  // iterations; existing snapshots and term history are loaded. Initial
  // terms apply only when no term history exists yet. `annotator`
  // overrides the one built from config.tagger.
  static std::unique_ptr<Session> open(
      const std::filesystem::path& dir, SessionConfig config,
      std::span<const std::string> initial_terms = {},
      std::shared_ptr<const text::PosAnnotator> annotator = nullptr);

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const SessionConfig& config() const { return config_; }
  const std::filesystem::path& directory() const { return dir_; }

  // Runs the pipeline over the current store prefix and records the
  // snapshot. Sparse-data errors propagate and nothing is recorded.
  SnapshotPtr run_iteration(std::span<const std::string> exclusions = {});
  // Union of the latest snapshot's exclusions with `terms`. Throws
  // Error(kInvalidArgument) when there is no prior snapshot.
  SnapshotPtr exclude_and_rerun(std::span<const std::string> terms);

  // Throws Error(kEmptyTermSet) if the resulting set would be empty.
  TermRevisionRecord revise_terms(std::span<const std::string> add,
                                  std::span<const std::string> remove);

  std::vector<SnapshotPtr> snapshots() const;
  SnapshotPtr snapshot(std::uint64_t sequence_number) const;
  SnapshotPtr latest() const;
  std::uint64_t latest_sequence() const;

  std::vector<TermRevisionRecord> term_history() const;
  // Null until search terms exist. Shared with a poller so revisions land
  // on its next cycle.
  std::shared_ptr<ingest::TermsProvider> terms_provider() const;

  // Called after a snapshot is persisted, outside all session locks.
  void add_listener(SnapshotListener listener);

  nlohmann::ordered_json describe() const;

 private:
  Session(std::filesystem::path dir, SessionConfig config,
          std::shared_ptr<const text::PosAnnotator> annotator);

  SnapshotPtr record(AnalysisSnapshot snapshot);
  void persist_session_locked() const;

  std::filesystem::path dir_;
  SessionConfig config_;
  std::shared_ptr<const text::PosAnnotator> annotator_;

  std::mutex writer_mu_;  // serializes iterations and term revisions

  mutable std::shared_mutex state_mu_;
  std::vector<SnapshotPtr> snapshots_;
  std::vector<TermRevisionRecord> term_history_;
  std::shared_ptr<ingest::TermsProvider> terms_;

  std::mutex listener_mu_;
  std::vector<SnapshotListener> listeners_;
};

std::filesystem::path snapshot_file(const std::filesystem::path& dir,
                                    std::uint64_t sequence_number);

// Writes `content` to a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace narrascope::session
