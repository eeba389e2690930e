#include "narrascope/ingest/search_terms.hpp"

#include <algorithm>
#include <cctype>

#include "narrascope/error.hpp"
#include "narrascope/text/tokenize.hpp"

namespace narrascope::ingest {
namespace {

std::string trimmed(std::string_view s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  auto first = std::find_if(s.begin(), s.end(), not_space);
  auto last = std::find_if(s.rbegin(), s.rend(), not_space).base();
  return first < last ? std::string(first, last) : std::string();
}

}  // namespace

TermKind classify_term(std::string_view term) {
  const std::vector<std::string> tokens = text::tokenize(term);
  if (tokens.size() == 1 && tokens.front() == term) {
    return text::is_sigil_token(term) ? TermKind::kTag : TermKind::kWord;
  }
  return TermKind::kPhrase;
}

MatchContext::MatchContext(std::string_view text)
    : folded_text_(text::case_fold(text)) {
  for (const std::string& token : text::tokenize(text)) {
    folded_tokens_.insert(text::case_fold(token));
  }
}

bool MatchContext::matches(std::string_view term) const {
  const std::string folded = text::case_fold(trimmed(term));
  if (folded.empty()) return false;
  if (classify_term(trimmed(term)) == TermKind::kPhrase) {
    return folded_text_.find(folded) != std::string::npos;
  }
  return folded_tokens_.contains(folded);
}

bool term_matches(std::string_view term, std::string_view text) {
  return MatchContext(text).matches(term);
}

std::vector<std::string> matching_terms(std::span<const std::string> terms,
                                        std::string_view text) {
  const MatchContext ctx(text);
  std::vector<std::string> out;
  for (const std::string& term : terms) {
    if (ctx.matches(term)) out.push_back(term);
  }
  return out;
}

SearchTermSet SearchTermSet::create(std::string event_name,
                                    std::span<const std::string> terms,
                                    std::uint64_t revision) {
  SearchTermSet set;
  set.event_name_ = std::move(event_name);
  set.revision_ = revision;
  for (const std::string& raw : terms) {
    std::string term = trimmed(raw);
    if (term.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "search term is blank");
    }
    if (!set.contains(term)) set.terms_.push_back(std::move(term));
  }
  if (set.terms_.empty()) {
    throw Error(ErrorKind::kEmptyTermSet, "search term set is empty");
  }
  return set;
}

bool SearchTermSet::contains(std::string_view term) const {
  const std::string folded = text::case_fold(trimmed(term));
  return std::any_of(terms_.begin(), terms_.end(), [&](const std::string& t) {
    return text::case_fold(t) == folded;
  });
}

SearchTermSet::Revision SearchTermSet::revise(
    std::span<const std::string> add, std::span<const std::string> remove) {
  std::vector<std::string> next = terms_;
  Revision rev;
  for (const std::string& raw : remove) {
    const std::string folded = text::case_fold(trimmed(raw));
    auto it = std::find_if(next.begin(), next.end(), [&](const std::string& t) {
      return text::case_fold(t) == folded;
    });
    if (it != next.end()) {
      rev.removed.push_back(*it);
      next.erase(it);
    }
  }
  for (const std::string& raw : add) {
    std::string term = trimmed(raw);
    if (term.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "search term is blank");
    }
    const std::string folded = text::case_fold(term);
    const bool present =
        std::any_of(next.begin(), next.end(), [&](const std::string& t) {
          return text::case_fold(t) == folded;
        });
    if (!present) {
      rev.added.push_back(term);
      next.push_back(std::move(term));
    }
  }
  if (next.empty()) {
    throw Error(ErrorKind::kEmptyTermSet,
                "revision would leave the search term set empty");
  }
  terms_ = std::move(next);
  ++revision_;
  rev.revision = revision_;
  rev.changed = !rev.added.empty() || !rev.removed.empty();
  return rev;
}

}  // namespace narrascope::ingest
