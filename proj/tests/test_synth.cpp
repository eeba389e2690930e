#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "doctest.h"
#include "narrascope/cooccur/cooccur.hpp"
#include "narrascope/ingest/post_store.hpp"
#include "narrascope/synth/synth.hpp"
#include "narrascope/text/filter.hpp"
#include "support/support.hpp"

using namespace narrascope::synth;
using narrascope::ErrorKind;
using narrascope::ingest::Post;
using V = std::vector<std::string>;

namespace {

ScenarioSpec planted() {
  return load_scenario(testsupport::fixture("fixtures/scenarios/planted_lie_trump.json"));
}

nlohmann::json planted_json() {
  return nlohmann::json::parse(
      testsupport::slurp(testsupport::fixture("fixtures/scenarios/planted_lie_trump.json")));
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Word-level check on the raw text, independent of the tagger.
bool has_word(const std::string& text, const std::set<std::string>& forms) {
  std::string word;
  const std::string t = lower(text) + " ";
  for (char c : t) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      word.push_back(c);
    } else {
      if (forms.contains(word)) return true;
      word.clear();
    }
  }
  return false;
}

const std::set<std::string> kLieForms{"lie", "lies", "lied", "lying"};

std::size_t count_both(const std::vector<Post>& posts, const std::string& verb,
                       const std::string& noun) {
  narrascope::text::BaselineAnnotator a;
  narrascope::text::FilterConfig cfg;
  std::size_t n = 0;
  for (const auto& p : posts) {
    const auto r = narrascope::text::relevant_terms(p.text, a, cfg);
    n += r.verbs.contains(verb) && r.nouns.contains(noun) ? 1 : 0;
  }
  return n;
}

std::optional<ErrorKind> parse_error(const nlohmann::json& j) {
  return testsupport::error_kind([&] { parse_scenario(j); });
}

std::optional<ErrorKind> validate_error(const ScenarioSpec& s) {
  narrascope::text::BaselineAnnotator a;
  return testsupport::error_kind([&] { validate(s, a); });
}

}  // namespace

TEST_CASE("seed 7, 1000 posts, rate 0.2 gives exactly 200 planted posts") {
  const auto spec = planted();
  CHECK(spec.seed == 7);
  CHECK(spec.post_count == 1000);
  const auto posts = generate(spec);
  REQUIRE(posts.size() == 1000);
  CHECK(planted_post_count(spec, spec.planted.at(0)) == 200);
  CHECK(count_both(posts, "lie", "trump") == 200);
  std::size_t surface = 0;
  for (const auto& p : posts) {
    surface += has_word(p.text, kLieForms) && has_word(p.text, {"trump"}) ? 1 : 0;
  }
  CHECK(surface == 200);
}

TEST_CASE("generation is byte-deterministic") {
  testsupport::TempDir dir;
  const auto spec = planted();
  write_posts(dir / "a.jsonl", generate(spec), spec);
  write_posts(dir / "b.jsonl", generate(spec), spec);
  CHECK(testsupport::slurp(dir / "a.jsonl") == testsupport::slurp(dir / "b.jsonl"));
  auto other = spec;
  other.seed = 8;
  write_posts(dir / "c.jsonl", generate(other), other);
  CHECK(testsupport::slurp(dir / "a.jsonl") != testsupport::slurp(dir / "c.jsonl"));
}

TEST_CASE("post shape: ids, evenly spaced timestamps, matched terms") {
  const auto spec = planted();
  const auto posts = generate(spec);
  CHECK(posts[0].id == "synth-7-0");
  CHECK(posts[999].id == "synth-7-999");
  CHECK(posts[0].created_at == spec.start);
  const auto step = (spec.end - spec.start) / 1000;
  CHECK(posts[1].created_at - posts[0].created_at == step);
  for (const auto& p : posts) {
    CHECK(p.created_at >= spec.start);
    CHECK(p.created_at < spec.end);
    CHECK(p.source == "replay");
    // matched_terms lists the search terms the text actually contains.
    REQUIRE(!p.matched_terms.empty());
    for (const auto& t : p.matched_terms) CHECK(has_word(p.text, {t}));
    CHECK_NOTHROW(narrascope::ingest::validate(p));
  }
}

TEST_CASE("planted posts stay inside their window and never overlap") {
  auto spec = planted();
  spec.post_count = 400;
  spec.planted = {{"lie", "trump", 0.3, 0.25, 0.75}, {"hide", "virus", 0.1, 0.5, 1.0}};
  const auto posts = generate(spec);
  narrascope::text::BaselineAnnotator a;
  narrascope::text::FilterConfig cfg;
  std::size_t lt = 0, hv = 0;
  for (std::size_t i = 0; i < posts.size(); ++i) {
    const auto r = narrascope::text::relevant_terms(posts[i].text, a, cfg);
    const bool is_lt = r.verbs.contains("lie") && r.nouns.contains("trump");
    const bool is_hv = r.verbs.contains("hide") && r.nouns.contains("virus");
    CHECK_FALSE((is_lt && is_hv));
    if (is_lt) {
      ++lt;
      CHECK(i >= 100);
      CHECK(i < 300);
    }
    if (is_hv) {
      ++hv;
      CHECK(i >= 200);
    }
  }
  // ceil(0.3 * 400 * 0.5) and ceil(0.1 * 400 * 0.5).
  CHECK(lt == 60);
  CHECK(hv == 20);
}

TEST_CASE("planted pair is the argmax cell of the shipped scenarios") {
  for (const auto& [name, verb, noun] :
       std::vector<std::tuple<std::string, std::string, std::string>>{
           {"planted_lie_trump", "lie", "trump"}, {"two_narratives", "build", "cage"}}) {
    const auto spec = load_scenario(testsupport::fixture("fixtures/scenarios/" + name + ".json"));
    const auto posts = generate(spec);
    narrascope::text::BaselineAnnotator a;
    narrascope::text::FilterConfig cfg;
    std::vector<narrascope::cooccur::PostTerms> terms;
    std::vector<narrascope::cooccur::PairSample> pairs;
    for (const auto& p : posts) {
      auto r = narrascope::text::relevant_terms(p.text, a, cfg);
      auto ps = narrascope::cooccur::extract_pairs(p.id, r.nouns, r.verbs);
      pairs.insert(pairs.end(), ps.begin(), ps.end());
      terms.push_back({p.id, r.nouns, r.verbs});
    }
    const auto top = narrascope::cooccur::top_k_terms(terms, 10);
    const auto t = narrascope::cooccur::build_table(pairs, top.verbs, top.nouns).table;
    const auto& c = t.counts();
    const auto best = static_cast<std::size_t>(std::max_element(c.begin(), c.end()) - c.begin());
    CHECK(t.row_labels()[best / t.cols()] == verb);
    CHECK(t.col_labels()[best % t.cols()] == noun);
  }
}

TEST_CASE("metadata sidecar records generator and seed") {
  testsupport::TempDir dir;
  const auto spec = planted();
  write_posts(dir / "out.jsonl", generate(spec), spec);
  const auto meta = nlohmann::json::parse(testsupport::slurp(dir / "out.jsonl.meta.json"));
  CHECK(meta.at("generator") == "mt19937_64");
  CHECK(meta.at("seed") == 7);
  CHECK(meta.at("post_count") == 1000);
  CHECK(parse_scenario(meta.at("scenario")) == spec);
  CHECK(narrascope::ingest::read_store(dir / "out.jsonl").size() == 1000);
}

TEST_CASE("scenario JSON round trip and weights") {
  const auto spec = planted();
  CHECK(parse_scenario(to_json(spec)) == spec);
  auto j = planted_json();
  j["background"]["nouns"][0] = {{"lemma", "trump"}, {"weight", 3.5}};
  CHECK(parse_scenario(j).background_nouns[0] == WeightedTerm{"trump", 3.5});
}

TEST_CASE("invalid scenarios are rejected") {
  auto j = planted_json();
  SUBCASE("rate 0") {
    j["planted"][0]["rate"] = 0.0;
    CHECK(validate_error(parse_scenario(j)) == ErrorKind::kInvalidSpec);
  }
  SUBCASE("rate above 1") {
    j["planted"][0]["rate"] = 1.5;
    CHECK(validate_error(parse_scenario(j)) == ErrorKind::kInvalidSpec);
  }
  SUBCASE("empty window") {
    j["planted"][0]["start"] = 0.5;
    j["planted"][0]["end"] = 0.5;
    CHECK(validate_error(parse_scenario(j)) == ErrorKind::kInvalidSpec);
  }
  SUBCASE("planted rates exceed the window") {
    j["planted"].push_back({{"verb", "hide"}, {"noun", "virus"}, {"rate", 0.9}});
    const auto spec = parse_scenario(j);
    CHECK(testsupport::error_kind([&] { generate(spec); }) == ErrorKind::kInvalidSpec);
  }
  SUBCASE("duplicate planted pair") {
    j["planted"].push_back(j["planted"][0]);
    CHECK(validate_error(parse_scenario(j)) == ErrorKind::kInvalidSpec);
  }
  SUBCASE("stop word in the vocabulary") {
    j["background"]["nouns"].push_back("the");
    CHECK(validate_error(parse_scenario(j)) == ErrorKind::kInvalidSpec);
  }
  SUBCASE("noun without a nominal reading") {
    j["background"]["nouns"].push_back("quickly");
    CHECK(validate_error(parse_scenario(j)) == ErrorKind::kInvalidSpec);
  }
  SUBCASE("uppercase vocabulary") {
    j["background"]["verbs"].push_back("Hide");
    CHECK(validate_error(parse_scenario(j)) == ErrorKind::kInvalidSpec);
  }
  SUBCASE("zero posts") {
    j["post_count"] = 0;
    CHECK(parse_error(j) == ErrorKind::kInvalidSpec);
  }
  SUBCASE("unknown key") {
    j["colour"] = "blue";
    CHECK(parse_error(j) == ErrorKind::kInvalidSpec);
  }
  SUBCASE("unknown planted key") {
    j["planted"][0]["weight"] = 1;
    CHECK(parse_error(j) == ErrorKind::kInvalidSpec);
  }
  SUBCASE("wrong type") {
    j["seed"] = "seven";
    CHECK(parse_error(j) == ErrorKind::kInvalidSpec);
  }
  SUBCASE("generate validates too") {
    j["planted"][0]["rate"] = 0.0;
    const auto spec = parse_scenario(j);
    CHECK(testsupport::error_kind([&] { generate(spec); }) == ErrorKind::kInvalidSpec);
  }
}

TEST_CASE("missing scenario file") {
  CHECK(testsupport::error_kind([] { load_scenario("/nonexistent/scenario.json"); }) ==
        ErrorKind::kNotFound);
}

TEST_CASE("templates render every slot") {
  CHECK(bundled_templates().size() == 8);
  const VerbForms lie{"lie", "lies", "lied", "lying"};
  CHECK(Template{"{Noun} {verb} {verb_s} {verb_ed} {verb_ing} {noun}"}.render("trump", lie) ==
        "Trump lie lies lied lying trump");
  for (const auto& t : bundled_templates()) {
    const auto s = t.render("trump", lie);
    CHECK(s.find('{') == std::string::npos);
    CHECK(has_word(s, kLieForms));
    CHECK(has_word(s, {"trump"}));
  }
}
