#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace narrascope::ingest {

// How a search term is matched against post text:
//   kTag    - #hashtag or @handle: case-folded equality with a whole token
//   kWord   - a single token: case-folded equality with a whole token
//   kPhrase - anything else (multi-word, embedded punctuation):
//             case-folded substring of the text
enum class TermKind { kWord, kPhrase, kTag };

TermKind classify_term(std::string_view term);

// Pre-tokenized, case-folded view of one post text, reused across terms.
class MatchContext {
 public:
  explicit MatchContext(std::string_view text);

  bool matches(std::string_view term) const;

 private:
  std::string folded_text_;
  std::unordered_set<std::string> folded_tokens_;
};

bool term_matches(std::string_view term, std::string_view text);

// Subset of `terms` (in their order) that match `text`.
std::vector<std::string> matching_terms(std::span<const std::string> terms,
                                        std::string_view text);

class SearchTermSet {
 public:
  struct Revision {
    std::uint64_t revision = 0;
    bool changed = false;
    std::vector<std::string> added;
    std::vector<std::string> removed;
  };

  // Duplicates (after case folding) collapse to the first spelling.
  // Throws Error(kEmptyTermSet) if no terms remain, kInvalidArgument for
  // blank terms.
  static SearchTermSet create(std::string event_name,
                              std::span<const std::string> terms,
                              std::uint64_t revision = 1);

  const std::string& event_name() const { return event_name_; }
  const std::vector<std::string>& terms() const { return terms_; }
  std::uint64_t revision() const { return revision_; }

  bool contains(std::string_view term) const;

  // Applies removals then additions. The revision always advances; a
  // revision that leaves the set unchanged is reported with changed=false.
  // Throws Error(kEmptyTermSet) and leaves *this untouched if the result
  // would be empty.
  Revision revise(std::span<const std::string> add,
                  std::span<const std::string> remove);

  bool operator==(const SearchTermSet&) const = default;

 private:
  SearchTermSet() = default;

  std::string event_name_;
  std::vector<std::string> terms_;
  std::uint64_t revision_ = 0;
};

}  // namespace narrascope::ingest
