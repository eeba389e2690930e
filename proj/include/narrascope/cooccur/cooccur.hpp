#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "narrascope/text/filter.hpp"

namespace narrascope::cooccur {

using text::LemmaSet;

// Filtered lemma sets of one post.
struct PostTerms {
  std::string post_id;
  LemmaSet nouns;
  LemmaSet verbs;
};

struct PairSample {
  std::string post_id;
  std::string verb;
  std::string noun;

  auto operator<=>(const PairSample&) const = default;
};

// verbs x nouns, one sample per pair; empty if either side is empty.
std::vector<PairSample> extract_pairs(std::string_view post_id,
                                      const LemmaSet& nouns,
                                      const LemmaSet& verbs);

struct TopTerms {
  std::vector<std::string> verbs;
  std::vector<std::string> nouns;

  bool operator==(const TopTerms&) const = default;
};

// Top k lemmas of each part of speech by document frequency (posts
// containing the lemma), ties broken lexicographically. Requires k >= 2;
// throws Error(kInsufficientVocabulary) when fewer than two distinct nouns
// or verbs occur overall.
TopTerms top_k_terms(std::span<const PostTerms> posts, std::size_t k);

// Verb rows x noun columns of co-occurrence counts (row-major).
class ContingencyTable {
 public:
  ContingencyTable() = default;

  // Throws Error(kInvalidArgument) on a shape mismatch, negative count,
  // duplicate label, or all-zero row or column.
  ContingencyTable(std::vector<std::string> row_labels,
                   std::vector<std::string> col_labels,
                   std::vector<std::int64_t> counts);

  std::size_t rows() const { return row_labels_.size(); }
  std::size_t cols() const { return col_labels_.size(); }
  const std::vector<std::string>& row_labels() const { return row_labels_; }
  const std::vector<std::string>& col_labels() const { return col_labels_; }
  const std::vector<std::int64_t>& counts() const { return counts_; }
  std::int64_t count(std::size_t row, std::size_t col) const {
    return counts_[row * cols() + col];
  }
  std::int64_t grand_total() const { return grand_total_; }
  std::vector<std::int64_t> row_totals() const;
  std::vector<std::int64_t> col_totals() const;

  bool operator==(const ContingencyTable&) const = default;

 private:
  std::vector<std::string> row_labels_;
  std::vector<std::string> col_labels_;
  std::vector<std::int64_t> counts_;
  std::int64_t grand_total_ = 0;
};

struct TableBuild {
  ContingencyTable table;
  std::vector<std::string> pruned_verbs;
  std::vector<std::string> pruned_nouns;
};

// Counts samples falling inside the top lists, then drops all-zero rows and
// columns (reported). Throws Error(kDegenerateTable) if fewer than two rows
// or columns survive, Error(kInvalidArgument) for empty top lists.
TableBuild build_table(std::span<const PairSample> pairs,
                       std::span<const std::string> top_verbs,
                       std::span<const std::string> top_nouns);

// First row: empty cell then noun labels; then one row per verb.
std::string to_csv(const ContingencyTable& table);
// Throws Error(kInvalidArgument) on malformed input.
ContingencyTable table_from_csv(std::string_view csv);

}  // namespace narrascope::cooccur
