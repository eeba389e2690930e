#include "narrascope/text/filter.hpp"

#include "narrascope/embedded_data.hpp"
#include "narrascope/text/tokenize.hpp"

namespace narrascope::text {

std::shared_ptr<const LemmaSet> bundled_stopwords() {
  static const std::shared_ptr<const LemmaSet> instance = [] {
    auto words = std::make_shared<LemmaSet>();
    const std::string_view text = data::bundled_stopwords_txt();
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t eol = text.find('\n', pos);
      if (eol == std::string_view::npos) eol = text.size();
      const std::string_view line = text.substr(pos, eol - pos);
      if (!line.empty() && line.front() != '#') words->insert(case_fold(line));
      pos = eol + 1;
    }
    return std::shared_ptr<const LemmaSet>(std::move(words));
  }();
  return instance;
}

bool FilterConfig::removes(std::string_view lemma) const {
  return (stopwords && stopwords->contains(lemma)) ||
         exclusions.contains(lemma);
}

RelevantTerms filter_relevant(std::span<const AnnotatedToken> tokens,
                              const FilterConfig& cfg) {
  RelevantTerms out;
  for (const AnnotatedToken& token : tokens) {
    if (token.pos == Pos::kOther || cfg.removes(token.lemma)) continue;
    if (is_nominal(token.pos)) {
      out.nouns.insert(token.lemma);
    } else {
      out.verbs.insert(token.lemma);
    }
  }
  return out;
}

RelevantTerms relevant_terms(std::string_view text,
                             const PosAnnotator& annotator,
                             const FilterConfig& cfg) {
  const std::vector<std::string> tokens = tokenize(text);
  const std::vector<AnnotatedToken> annotated = annotator.annotate(tokens);
  return filter_relevant(annotated, cfg);
}

}  // namespace narrascope::text
