#include "narrascope/ingest/post_store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <utility>

#include "narrascope/error.hpp"

namespace narrascope::ingest {
namespace {

[[noreturn]] void storage_failure(const std::string& what) {
  throw Error(ErrorKind::kStorageFailure, what);
}

std::string errno_text() { return std::strerror(errno); }

std::string read_all(int fd) {
  std::string content;
  if (::lseek(fd, 0, SEEK_SET) < 0) storage_failure("seek: " + errno_text());
  char buf[1 << 16];
  for (;;) {
    const ssize_t n = ::read(fd, buf, sizeof buf);
    if (n < 0) {
      if (errno == EINTR) continue;
      storage_failure("read: " + errno_text());
    }
    if (n == 0) break;
    content.append(buf, static_cast<std::size_t>(n));
  }
  return content;
}

bool write_fully(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

template <typename Fn>
void for_each_record(std::string_view content, Fn&& fn) {
  std::size_t pos = 0;
  while (pos < content.size()) {
    const std::size_t eol = content.find('\n', pos);
    if (eol == std::string_view::npos) break;  // torn tail
    if (!fn(content.substr(pos, eol - pos))) break;
    pos = eol + 1;
  }
}

Post parse_record(std::string_view line, const std::filesystem::path& path) {
  try {
    return post_from_json(nlohmann::json::parse(line));
  } catch (const nlohmann::json::exception& e) {
    storage_failure("corrupt record in " + path.string() + ": " + e.what());
  } catch (const Error& e) {
    storage_failure("corrupt record in " + path.string() + ": " + e.what());
  }
}

CursorMap load_cursors(const std::filesystem::path& path) {
  CursorMap cursors;
  std::ifstream in(path);
  if (!in) return cursors;
  try {
    const auto j = nlohmann::json::parse(in);
    for (const auto& [term, token] : j.items()) {
      cursors[term] = token.get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    storage_failure("corrupt cursor file " + path.string() + ": " + e.what());
  }
  return cursors;
}

}  // namespace

std::filesystem::path cursor_path(const std::filesystem::path& store_path) {
  return store_path.string() + ".cursors.json";
}

PostStore PostStore::open(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  PostStore store;
  store.path_ = path;
  store.fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_APPEND | O_CLOEXEC,
                     0644);
  if (store.fd_ < 0) {
    storage_failure("cannot open store " + path.string() + ": " + errno_text());
  }
  if (::flock(store.fd_, LOCK_EX | LOCK_NB) != 0) {
    storage_failure("store " + path.string() + " already has a writer");
  }
  const std::string content = read_all(store.fd_);
  std::size_t complete = content.rfind('\n');
  complete = complete == std::string::npos ? 0 : complete + 1;
  if (complete != content.size()) {
    if (::ftruncate(store.fd_, static_cast<off_t>(complete)) != 0) {
      storage_failure("cannot trim torn record: " + errno_text());
    }
  }
  for_each_record(std::string_view(content).substr(0, complete),
                  [&](std::string_view line) {
                    store.last_good_ = parse_record(line, path).id;
                    store.ids_.insert(store.last_good_);
                    ++store.count_;
                    return true;
                  });
  store.cursors_ = load_cursors(cursor_path(path));
  return store;
}

PostStore::PostStore(PostStore&& other) noexcept
    : path_(std::move(other.path_)),
      fd_(std::exchange(other.fd_, -1)),
      count_(other.count_),
      last_good_(std::move(other.last_good_)),
      ids_(std::move(other.ids_)),
      cursors_(std::move(other.cursors_)) {}

PostStore& PostStore::operator=(PostStore&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    path_ = std::move(other.path_);
    fd_ = std::exchange(other.fd_, -1);
    count_ = other.count_;
    last_good_ = std::move(other.last_good_);
    ids_ = std::move(other.ids_);
    cursors_ = std::move(other.cursors_);
  }
  return *this;
}

PostStore::~PostStore() {
  if (fd_ >= 0) ::close(fd_);
}

bool PostStore::contains(std::string_view id) const {
  return ids_.contains(std::string(id));
}

std::size_t PostStore::dedup_append(std::span<const Post> batch) {
  for (const Post& post : batch) validate(post);
  std::size_t appended = 0;
  for (const Post& post : batch) {
    if (ids_.contains(post.id)) continue;
    const std::string line = to_jsonl_line(post);
    struct stat st {};
    if (::fstat(fd_, &st) != 0) {
      storage_failure("stat failed; last good id " + last_good_);
    }
    if (!write_fully(fd_, line)) {
      const std::string reason = errno_text();
      const bool cut = ::ftruncate(fd_, st.st_size) == 0;
      storage_failure("write failed (" + reason + "); last good id " +
                      last_good_ + (cut ? "" : "; truncation also failed"));
    }
    ids_.insert(post.id);
    ++count_;
    ++appended;
    last_good_ = post.id;
  }
  return appended;
}

void PostStore::save_cursors(const CursorMap& cursors) {
  const std::filesystem::path target = cursor_path(path_);
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << nlohmann::json(cursors).dump() << '\n';
    if (!out) storage_failure("cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) storage_failure("cannot replace " + target.string());
  cursors_ = cursors;
}

std::vector<Post> read_store(const std::filesystem::path& path,
                             std::optional<std::size_t> max_records) {
  std::vector<Post> posts;
  const int fd = ::open(path.c_str(), O_RDONLY | O_CLOEXEC);
  if (fd < 0) {
    if (errno == ENOENT) return posts;
    storage_failure("cannot open store " + path.string() + ": " +
                    errno_text());
  }
  std::string content;
  try {
    content = read_all(fd);
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
  for_each_record(content, [&](std::string_view line) {
    if (max_records && posts.size() >= *max_records) return false;
    posts.push_back(parse_record(line, path));
    return true;
  });
  return posts;
}

}  // namespace narrascope::ingest
