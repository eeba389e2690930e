#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "narrascope/ingest/post.hpp"

namespace narrascope::ingest {

// Per-term opaque pagination tokens, keyed by the search term as spelled in
// the term set.
using CursorMap = std::map<std::string, std::string>;

// Append-only JSONL post store. One writer per file (enforced with an
// advisory lock); readers use read_store() and always see whole records.
class PostStore {
 public:
  // Opens or creates the store. A torn final line left by an interrupted
  // write is cut off. Throws Error(kStorageFailure).
  static PostStore open(const std::filesystem::path& path);

  PostStore(PostStore&& other) noexcept;
  PostStore& operator=(PostStore&& other) noexcept;
  PostStore(const PostStore&) = delete;
  PostStore& operator=(const PostStore&) = delete;
  ~PostStore();

  const std::filesystem::path& path() const { return path_; }
  std::size_t count() const { return count_; }
  bool contains(std::string_view id) const;

  // Appends the posts whose ids are not yet stored (first occurrence wins
  // within the batch) and returns how many were written. On a write error
  // the file is cut back to the last complete record and
  // Error(kStorageFailure) names the last id that made it to disk.
  std::size_t dedup_append(std::span<const Post> batch);

  // Pagination state, persisted next to the store as "<store>.cursors.json".
  const CursorMap& cursors() const { return cursors_; }
  void save_cursors(const CursorMap& cursors);

 private:
  PostStore() = default;

  std::filesystem::path path_;
  int fd_ = -1;
  std::size_t count_ = 0;
  std::string last_good_ = "(none)";
  std::unordered_set<std::string> ids_;
  CursorMap cursors_;
};

std::filesystem::path cursor_path(const std::filesystem::path& store_path);

// Reads complete records in file order, stopping after `max_records` if
// given. A missing file reads as empty. Throws Error(kStorageFailure) on a
// corrupt record.
std::vector<Post> read_store(const std::filesystem::path& path,
                             std::optional<std::size_t> max_records = {});

}  // namespace narrascope::ingest
