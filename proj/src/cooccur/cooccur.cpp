#include "narrascope/cooccur/cooccur.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <unordered_map>

#include "narrascope/error.hpp"

namespace narrascope::cooccur {
namespace {

std::vector<std::string> top_by_frequency(
    const std::map<std::string, std::size_t>& freq, std::size_t k) {
  std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(),
                                                          freq.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) {
                     return a.second > b.second;  // map order breaks ties
                   });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < ranked.size() && i < k; ++i) {
    out.push_back(ranked[i].first);
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::vector<std::string> parse_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  if (quoted) {
    throw Error(ErrorKind::kInvalidArgument, "unterminated quote in CSV");
  }
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace

std::vector<PairSample> extract_pairs(std::string_view post_id,
                                      const LemmaSet& nouns,
                                      const LemmaSet& verbs) {
  std::vector<PairSample> out;
  out.reserve(nouns.size() * verbs.size());
  for (const std::string& verb : verbs) {
    for (const std::string& noun : nouns) {
      out.push_back({std::string(post_id), verb, noun});
    }
  }
  return out;
}

TopTerms top_k_terms(std::span<const PostTerms> posts, std::size_t k) {
  if (k < 2) throw Error(ErrorKind::kInvalidArgument, "top-k needs k >= 2");
  std::map<std::string, std::size_t> verb_freq;
  std::map<std::string, std::size_t> noun_freq;
  for (const PostTerms& post : posts) {
    for (const std::string& v : post.verbs) ++verb_freq[v];
    for (const std::string& n : post.nouns) ++noun_freq[n];
  }
  if (verb_freq.size() < 2 || noun_freq.size() < 2) {
    throw Error(ErrorKind::kInsufficientVocabulary,
                "not enough data yet: " + std::to_string(verb_freq.size()) +
                    " distinct verbs and " + std::to_string(noun_freq.size()) +
                    " distinct nouns (need at least 2 of each)");
  }
  return {top_by_frequency(verb_freq, k), top_by_frequency(noun_freq, k)};
}

ContingencyTable::ContingencyTable(std::vector<std::string> row_labels,
                                   std::vector<std::string> col_labels,
                                   std::vector<std::int64_t> counts)
    : row_labels_(std::move(row_labels)),
      col_labels_(std::move(col_labels)),
      counts_(std::move(counts)) {
  if (counts_.size() != rows() * cols()) {
    throw Error(ErrorKind::kInvalidArgument, "table shape mismatch");
  }
  auto unique = [](const std::vector<std::string>& labels) {
    return std::set<std::string>(labels.begin(), labels.end()).size() ==
           labels.size();
  };
  if (!unique(row_labels_) || !unique(col_labels_)) {
    throw Error(ErrorKind::kInvalidArgument, "duplicate table label");
  }
  for (std::int64_t c : counts_) {
    if (c < 0) throw Error(ErrorKind::kInvalidArgument, "negative count");
    grand_total_ += c;
  }
  for (std::int64_t t : row_totals()) {
    if (t == 0) throw Error(ErrorKind::kInvalidArgument, "all-zero row");
  }
  for (std::int64_t t : col_totals()) {
    if (t == 0) throw Error(ErrorKind::kInvalidArgument, "all-zero column");
  }
}

std::vector<std::int64_t> ContingencyTable::row_totals() const {
  std::vector<std::int64_t> totals(rows(), 0);
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = 0; j < cols(); ++j) totals[i] += count(i, j);
  }
  return totals;
}

std::vector<std::int64_t> ContingencyTable::col_totals() const {
  std::vector<std::int64_t> totals(cols(), 0);
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = 0; j < cols(); ++j) totals[j] += count(i, j);
  }
  return totals;
}

TableBuild build_table(std::span<const PairSample> pairs,
                       std::span<const std::string> top_verbs,
                       std::span<const std::string> top_nouns) {
  if (top_verbs.empty() || top_nouns.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "top lists must be non-empty");
  }
  std::unordered_map<std::string_view, std::size_t> row_of;
  std::unordered_map<std::string_view, std::size_t> col_of;
  for (std::size_t i = 0; i < top_verbs.size(); ++i) row_of[top_verbs[i]] = i;
  for (std::size_t j = 0; j < top_nouns.size(); ++j) col_of[top_nouns[j]] = j;

  const std::size_t cols = top_nouns.size();
  std::vector<std::int64_t> full(top_verbs.size() * cols, 0);
  for (const PairSample& p : pairs) {
    auto r = row_of.find(p.verb);
    auto c = col_of.find(p.noun);
    if (r != row_of.end() && c != col_of.end()) {
      ++full[r->second * cols + c->second];
    }
  }

  std::vector<std::size_t> keep_rows;
  std::vector<std::size_t> keep_cols;
  TableBuild out;
  for (std::size_t i = 0; i < top_verbs.size(); ++i) {
    bool any = false;
    for (std::size_t j = 0; j < cols; ++j) any = any || full[i * cols + j] != 0;
    if (any) {
      keep_rows.push_back(i);
    } else {
      out.pruned_verbs.push_back(top_verbs[i]);
    }
  }
  for (std::size_t j = 0; j < cols; ++j) {
    bool any = false;
    for (std::size_t i = 0; i < top_verbs.size(); ++i) {
      any = any || full[i * cols + j] != 0;
    }
    if (any) {
      keep_cols.push_back(j);
    } else {
      out.pruned_nouns.push_back(top_nouns[j]);
    }
  }
  if (keep_rows.size() < 2 || keep_cols.size() < 2) {
    throw Error(ErrorKind::kDegenerateTable,
                "not enough data yet: only " +
                    std::to_string(keep_rows.size()) + " verbs and " +
                    std::to_string(keep_cols.size()) +
                    " nouns co-occur among the top terms");
  }

  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::int64_t> counts;
  for (std::size_t i : keep_rows) row_labels.push_back(top_verbs[i]);
  for (std::size_t j : keep_cols) col_labels.push_back(top_nouns[j]);
  for (std::size_t i : keep_rows) {
    for (std::size_t j : keep_cols) counts.push_back(full[i * cols + j]);
  }
  out.table = ContingencyTable(std::move(row_labels), std::move(col_labels),
                               std::move(counts));
  return out;
}

std::string to_csv(const ContingencyTable& table) {
  std::string out;
  for (const std::string& label : table.col_labels()) {
    out += ',';
    out += csv_field(label);
  }
  out += '\n';
  for (std::size_t i = 0; i < table.rows(); ++i) {
    out += csv_field(table.row_labels()[i]);
    for (std::size_t j = 0; j < table.cols(); ++j) {
      out += ',';
      out += std::to_string(table.count(i, j));
    }
    out += '\n';
  }
  return out;
}

ContingencyTable table_from_csv(std::string_view csv) {
  std::vector<std::vector<std::string>> lines;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t eol = csv.find('\n', pos);
    if (eol == std::string_view::npos) eol = csv.size();
    std::string_view line = csv.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(parse_csv_line(line));
    pos = eol + 1;
  }
  if (lines.size() < 2 || lines.front().size() < 2) {
    throw Error(ErrorKind::kInvalidArgument, "CSV table needs a header and rows");
  }
  std::vector<std::string> cols(lines.front().begin() + 1, lines.front().end());
  std::vector<std::string> rows;
  std::vector<std::int64_t> counts;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto& fields = lines[r];
    if (fields.size() != cols.size() + 1) {
      throw Error(ErrorKind::kInvalidArgument,
                  "CSV row " + std::to_string(r + 1) + " has the wrong width");
    }
    rows.push_back(fields.front());
    for (std::size_t c = 1; c < fields.size(); ++c) {
      std::int64_t value = 0;
      const std::string& f = fields[c];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
      if (ec != std::errc{} || ptr != f.data() + f.size()) {
        throw Error(ErrorKind::kInvalidArgument,
                    "CSV cell '" + f + "' is not an integer");
      }
      counts.push_back(value);
    }
  }
  return ContingencyTable(std::move(rows), std::move(cols), std::move(counts));
}

}  // namespace narrascope::cooccur
