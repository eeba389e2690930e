#include <algorithm>
#include <array>
#include <charconv>
#include <vector>

#include "narrascope/error.hpp"
#include "narrascope/render/render.hpp"

namespace narrascope::render {
namespace {

std::string number(double v) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 4);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string render_report(const session::AnalysisSnapshot& snapshot, std::size_t top_n) {
  if (top_n == 0) throw Error(ErrorKind::kInvalidArgument, "top_n must be at least 1");
  constexpr std::size_t kCols = 7;
  // Text columns are left aligned, numeric ones right aligned.
  constexpr std::array<bool, kCols> kLeft = {false, true, true, false, false, false, false};
  std::vector<std::array<std::string, kCols>> rows;
  rows.push_back({"rank", "verb", "noun", "score", "cosine", "verb_norm", "noun_norm"});
  const std::size_t n = std::min(top_n, snapshot.candidates.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = snapshot.candidates[i];
    rows.push_back({std::to_string(i + 1), c.verb, c.noun, number(c.score), number(c.cosine),
                    number(c.verb_norm), number(c.noun_norm)});
  }
  std::array<std::size_t, kCols> width{};
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < kCols; ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < kCols; ++c) {
      if (c) line += "  ";
      const std::string fill(width[c] - row[c].size(), ' ');
      line += kLeft[c] ? row[c] + fill : fill + row[c];
    }
    line.erase(line.find_last_not_of(' ') + 1);
    out += line + "\n";
  }
  return out;
}

}  // namespace narrascope::render
