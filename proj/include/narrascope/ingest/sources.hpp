#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "narrascope/ingest/post.hpp"
#include "narrascope/ingest/post_store.hpp"
#include "narrascope/ingest/search_terms.hpp"

namespace narrascope::ingest {

struct PollResult {
  std::vector<Post> batch;
  CursorMap cursors;
  std::size_t malformed = 0;
  std::vector<std::string> diagnostics;  // one line per skipped record
};

class Source {
 public:
  virtual ~Source() = default;

  // `terms` is never empty here; poll_once() checks that first.
  virtual PollResult poll(std::span<const std::string> terms,
                          const CursorMap& cursors) = 0;

  // True when a further poll cannot return anything new. Live sources never
  // run dry.
  virtual bool exhausted(const CursorMap& /*cursors*/) const { return false; }

  virtual std::string_view kind() const = 0;
};

// Reads raw records from a JSONL file. Each line needs "id", "created_at"
// and "text"; "matched_terms" and "source" are recomputed. Posts are matched
// against the current terms, so terms added mid-replay apply from the
// current file position onward. page_size 0 reads to the end of the file.
class ReplaySource final : public Source {
 public:
  explicit ReplaySource(std::filesystem::path path, std::size_t page_size = 0);

  PollResult poll(std::span<const std::string> terms,
                  const CursorMap& cursors) override;
  bool exhausted(const CursorMap& cursors) const override;
  std::string_view kind() const override { return "replay"; }

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::size_t page_size_;
};

struct LiveSourceConfig {
  // Placeholders: {term}, {cursor}, {page_size}; values are URL-encoded.
  std::string endpoint_url_template;
  // Name of the environment variable holding the bearer token. Empty means
  // no Authorization header.
  std::string auth_token_env;
  std::size_t page_size = 100;
  double interval_seconds = 180.0;
};

struct IngestConfig {
  std::string event_name;
  std::vector<std::string> terms;
  LiveSourceConfig live;
};

// Strict parse: only event_name, terms, endpoint_url_template,
// auth_token_env, page_size and interval_seconds are accepted.
// Throws Error(kInvalidArgument).
IngestConfig parse_ingest_config(std::string_view json_text);
IngestConfig load_ingest_config(const std::filesystem::path& path);

// Generic HTTP GET adapter. One request per term per poll; the response
// body is a JSON array of records shaped like replay lines. The cursor for
// a term becomes the id of the last record returned.
class HttpSource final : public Source {
 public:
  explicit HttpSource(LiveSourceConfig config);

  PollResult poll(std::span<const std::string> terms,
                  const CursorMap& cursors) override;
  std::string_view kind() const override { return "live"; }

  std::string expand_url(std::string_view term, std::string_view cursor) const;

 private:
  LiveSourceConfig config_;
};

std::string url_encode(std::string_view s);

// Checks the term list, polls, and verifies every returned post carries at
// least one matched term. Throws Error(kEmptyTermSet) before any fetch when
// `terms` is empty.
PollResult poll_once(Source& source, std::span<const std::string> terms,
                     const CursorMap& cursors);
PollResult poll_once(Source& source, const SearchTermSet& terms,
                     const CursorMap& cursors);

}  // namespace narrascope::ingest
