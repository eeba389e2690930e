#include "doctest.h"
#include "narrascope/text/filter.hpp"
#include "narrascope/text/tokenize.hpp"
#include "support/support.hpp"

using namespace narrascope::text;

TEST_CASE("hand-applied relevance examples") {
  BaselineAnnotator a;
  FilterConfig cfg;
  const auto r = relevant_terms("Trump lies about Trump", a, cfg);
  CHECK(r.nouns == LemmaSet{"trump"});
  CHECK(r.verbs == LemmaSet{"lie"});
  CHECK(relevant_terms("the an of", a, cfg) == RelevantTerms{});
  CHECK(relevant_terms("", a, cfg) == RelevantTerms{});
}

TEST_CASE("exclusions remove lemmas from both roles") {
  BaselineAnnotator a;
  FilterConfig cfg;
  cfg.exclusions = {"trump", "attack"};
  const auto r = relevant_terms("Trump attacks Biden and lies", a, cfg);
  CHECK(r.nouns == LemmaSet{"biden"});
  CHECK(r.verbs == LemmaSet{"lie"});
  CHECK(cfg.removes("trump"));
  CHECK(cfg.removes("the"));
  CHECK_FALSE(cfg.removes("biden"));
}

TEST_CASE("stop words never survive the filter") {
  BaselineAnnotator a;
  FilterConfig cfg;
  const auto stop = bundled_stopwords();
  CHECK(stop->contains("the"));
  CHECK(stop->contains("is"));
  const auto text = testsupport::slurp(testsupport::fixture("tests/fixtures/corpus_messy.jsonl")) +
                    testsupport::slurp(testsupport::fixture("tests/fixtures/corpus40.jsonl"));
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    const auto r = relevant_terms(text.substr(start, end - start), a, cfg);
    for (const auto& n : r.nouns) CHECK_FALSE(stop->contains(n));
    for (const auto& v : r.verbs) CHECK_FALSE(stop->contains(v));
    start = end == std::string::npos ? text.size() : end + 1;
  }
}

TEST_CASE("filter_relevant keeps roles by tag") {
  FilterConfig cfg;
  const std::vector<AnnotatedToken> tokens = {
      {"Trump", Pos::kPropn, "trump"},
      {"mask", Pos::kNoun, "mask"},
      {"hide", Pos::kVerb, "hide"},
      {"big", Pos::kOther, "big"},
      {"the", Pos::kOther, "the"},
      {"masks", Pos::kNoun, "mask"},
  };
  const auto r = filter_relevant(tokens, cfg);
  CHECK(r.nouns == LemmaSet{"mask", "trump"});
  CHECK(r.verbs == LemmaSet{"hide"});
}

TEST_CASE("the same lemma may be both a noun and a verb in one post") {
  FilterConfig cfg;
  const std::vector<AnnotatedToken> tokens = {
      {"attack", Pos::kNoun, "attack"},
      {"attacked", Pos::kVerb, "attack"},
  };
  const auto r = filter_relevant(tokens, cfg);
  CHECK(r.nouns == LemmaSet{"attack"});
  CHECK(r.verbs == LemmaSet{"attack"});
}
