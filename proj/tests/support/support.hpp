#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "narrascope/cooccur/cooccur.hpp"
#include "narrascope/error.hpp"
#include "narrascope/ingest/post.hpp"

namespace testsupport {

namespace fs = std::filesystem;

inline fs::path source_dir() { return fs::path(NARRASCOPE_SOURCE_DIR); }
inline fs::path fixture(const std::string& rel) { return source_dir() / rel; }

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            ("narrascope-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
}

inline narrascope::ingest::Post make_post(std::string id, std::string text,
                                          std::vector<std::string> terms = {"x"},
                                          std::string created = "2020-10-07T12:00:00Z") {
  narrascope::ingest::Post p;
  p.id = std::move(id);
  p.created_at = narrascope::ingest::parse_timestamp(created);
  p.text = std::move(text);
  p.matched_terms = std::move(terms);
  p.source = "replay";
  return p;
}

// Random table R x C with every margin non-zero (a random cell per row and
// column is forced positive).
inline narrascope::cooccur::ContingencyTable random_table(std::mt19937_64& rng, std::size_t rows,
                                                          std::size_t cols, int max_count = 20) {
  std::uniform_int_distribution<int> cell(0, max_count);
  std::vector<std::int64_t> counts(rows * cols);
  for (auto& c : counts) c = cell(rng) < max_count / 3 ? 0 : cell(rng);
  for (std::size_t i = 0; i < rows; ++i) counts[i * cols + (i % cols)] += 1;
  for (std::size_t j = 0; j < cols; ++j) counts[(j % rows) * cols + j] += 1;
  std::vector<std::string> rl, cl;
  for (std::size_t i = 0; i < rows; ++i) rl.push_back("v" + std::to_string(i));
  for (std::size_t j = 0; j < cols; ++j) cl.push_back("n" + std::to_string(j));
  return {std::move(rl), std::move(cl), std::move(counts)};
}

// Kind of the narrascope::Error thrown by fn, or nullopt if none.
template <typename Fn>
std::optional<narrascope::ErrorKind> error_kind(Fn&& fn) {
  try {
    fn();
  } catch (const narrascope::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace testsupport
