#pragma once

#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>

#include "narrascope/text/annotator.hpp"

namespace narrascope::text {

using LemmaSet = std::set<std::string, std::less<>>;

// The bundled SMART English stop-word list.
std::shared_ptr<const LemmaSet> bundled_stopwords();

struct FilterConfig {
  std::shared_ptr<const LemmaSet> stopwords = bundled_stopwords();
  // Analyst-supplied, case-folded lemmas for this event.
  LemmaSet exclusions;

  bool removes(std::string_view lemma) const;
};

struct RelevantTerms {
  LemmaSet nouns;  // NOUN and PROPN lemmas
  LemmaSet verbs;

  bool operator==(const RelevantTerms&) const = default;
};

// Distinct noun and verb lemmas of one post, minus stop words and
// exclusions.
RelevantTerms filter_relevant(std::span<const AnnotatedToken> tokens,
                              const FilterConfig& cfg);

// tokenize + annotate + filter_relevant for one post text.
RelevantTerms relevant_terms(std::string_view text,
                             const PosAnnotator& annotator,
                             const FilterConfig& cfg);

}  // namespace narrascope::text
