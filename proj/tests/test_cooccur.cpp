#include <algorithm>
#include <map>
#include <random>

#include "doctest.h"
#include "narrascope/cooccur/cooccur.hpp"
#include "narrascope/ingest/post_store.hpp"
#include "narrascope/synth/synth.hpp"
#include "narrascope/text/filter.hpp"
#include "support/support.hpp"

using namespace narrascope::cooccur;
using narrascope::ErrorKind;
using narrascope::text::BaselineAnnotator;
using narrascope::text::FilterConfig;
using V = std::vector<std::string>;

namespace {

std::vector<PostTerms> post_terms(const std::vector<narrascope::ingest::Post>& posts) {
  BaselineAnnotator annotator;
  FilterConfig cfg;
  std::vector<PostTerms> out;
  for (const auto& p : posts) {
    auto r = narrascope::text::relevant_terms(p.text, annotator, cfg);
    out.push_back({p.id, std::move(r.nouns), std::move(r.verbs)});
  }
  return out;
}

std::vector<PairSample> all_pairs(std::span<const PostTerms> posts) {
  std::vector<PairSample> pairs;
  for (const auto& p : posts) {
    auto ps = extract_pairs(p.post_id, p.nouns, p.verbs);
    pairs.insert(pairs.end(), ps.begin(), ps.end());
  }
  return pairs;
}

// Nested-loop recount straight from the per-post sets.
std::vector<std::int64_t> brute_force(std::span<const PostTerms> posts, const V& rows,
                                      const V& cols) {
  std::vector<std::int64_t> counts(rows.size() * cols.size(), 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      for (const auto& p : posts) {
        if (p.verbs.contains(rows[i]) && p.nouns.contains(cols[j])) {
          ++counts[i * cols.size() + j];
        }
      }
    }
  }
  return counts;
}

// Top-k by a plain count-then-sort over the lemma sets.
V brute_top(std::span<const PostTerms> posts, bool verbs, std::size_t k) {
  std::map<std::string, int> df;
  for (const auto& p : posts) {
    for (const auto& l : verbs ? p.verbs : p.nouns) ++df[l];
  }
  std::vector<std::pair<std::string, int>> v(df.begin(), df.end());
  std::stable_sort(v.begin(), v.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  V out;
  for (std::size_t i = 0; i < v.size() && i < k; ++i) out.push_back(v[i].first);
  return out;
}

void check_oracle(const std::vector<narrascope::ingest::Post>& posts, std::size_t k) {
  const auto terms = post_terms(posts);
  const auto top = top_k_terms(terms, k);
  CHECK(top.verbs == brute_top(terms, true, k));
  CHECK(top.nouns == brute_top(terms, false, k));
  const auto build = build_table(all_pairs(terms), top.verbs, top.nouns);
  const auto& t = build.table;
  CHECK(t.counts() == brute_force(terms, t.row_labels(), t.col_labels()));
  // Every label of the top lists is either kept or reported as pruned.
  V rows = t.row_labels();
  rows.insert(rows.end(), build.pruned_verbs.begin(), build.pruned_verbs.end());
  std::sort(rows.begin(), rows.end());
  V expect_rows = top.verbs;
  std::sort(expect_rows.begin(), expect_rows.end());
  CHECK(rows == expect_rows);
  for (const auto& v : build.pruned_verbs) {
    for (const auto& c : top.nouns) {
      CHECK(brute_force(terms, {v}, {c}) == std::vector<std::int64_t>{0});
    }
  }
}

std::vector<narrascope::ingest::Post> synth_corpus(std::size_t n) {
  auto spec = narrascope::synth::load_scenario(
      testsupport::fixture("fixtures/scenarios/planted_lie_trump.json"));
  spec.post_count = n;
  return narrascope::synth::generate(spec);
}

}  // namespace

TEST_CASE("extract_pairs hand examples") {
  CHECK(extract_pairs("p", {"trump", "vote"}, {"lie"}) ==
        std::vector<PairSample>{{"p", "lie", "trump"}, {"p", "lie", "vote"}});
  CHECK(extract_pairs("p", {}, {"win"}).empty());
  CHECK(extract_pairs("p", {"win"}, {}).empty());
  CHECK(extract_pairs("p", {"a", "b", "c"}, {"x", "y"}).size() == 6);
}

TEST_CASE("top_k ties break lexicographically") {
  std::vector<PostTerms> posts;
  for (int i = 0; i < 5; ++i) posts.push_back({"a" + std::to_string(i), {"n1", "n2"}, {"win", "lie"}});
  for (int i = 0; i < 3; ++i) posts.push_back({"b" + std::to_string(i), {"n3"}, {"say"}});
  const auto top = top_k_terms(posts, 2);
  CHECK(top.verbs == V{"lie", "win"});
  CHECK(top.nouns == V{"n1", "n2"});
  // Fewer than k only when the vocabulary is smaller.
  CHECK(top_k_terms(posts, 10).verbs == V{"lie", "win", "say"});
}

TEST_CASE("top_k preconditions and degenerate vocabularies") {
  std::vector<PostTerms> one_noun = {{"a", {"trump"}, {"lie", "win"}},
                                     {"b", {"trump"}, {"say"}}};
  CHECK(testsupport::error_kind([&] { top_k_terms(one_noun, 10); }) ==
        ErrorKind::kInsufficientVocabulary);
  std::vector<PostTerms> one_verb = {{"a", {"trump", "biden"}, {"lie"}}};
  CHECK(testsupport::error_kind([&] { top_k_terms(one_verb, 10); }) ==
        ErrorKind::kInsufficientVocabulary);
  CHECK(testsupport::error_kind([&] { top_k_terms({}, 10); }) ==
        ErrorKind::kInsufficientVocabulary);
  std::vector<PostTerms> ok = {{"a", {"trump", "biden"}, {"lie", "win"}}};
  CHECK(testsupport::error_kind([&] { top_k_terms(ok, 1); }) ==
        ErrorKind::kInvalidArgument);
}

TEST_CASE("top lists over the 40-post corpus match the hand count") {
  const auto terms = post_terms(narrascope::ingest::read_store(
      testsupport::fixture("tests/fixtures/corpus40.jsonl")));
  REQUIRE(terms.size() == 40);
  const auto top = top_k_terms(terms, 10);
  CHECK(top.nouns == V{"trump", "biden", "pence", "virus", "debate", "ballot", "border",
                       "economy", "fly", "harris"});
  CHECK(top.verbs == V{"lie", "attack", "build", "claim", "vote", "blame", "count", "refuse",
                       "reject", "answer"});
}

TEST_CASE("build_table hand example") {
  std::vector<PairSample> pairs;
  for (int i = 0; i < 3; ++i) pairs.push_back({"t" + std::to_string(i), "lie", "trump"});
  pairs.push_back({"v0", "lie", "vote"});
  for (int i = 0; i < 2; ++i) pairs.push_back({"w" + std::to_string(i), "win", "trump"});
  const V verbs{"lie", "win"}, nouns{"trump", "vote"};
  const auto b = build_table(pairs, verbs, nouns);
  CHECK(b.table.row_labels() == verbs);
  CHECK(b.table.col_labels() == nouns);
  CHECK(b.table.counts() == std::vector<std::int64_t>{3, 1, 2, 0});
  CHECK(b.table.grand_total() == 6);
  CHECK(b.table.row_totals() == std::vector<std::int64_t>{4, 2});
  CHECK(b.table.col_totals() == std::vector<std::int64_t>{5, 1});
  CHECK(b.pruned_verbs.empty());
  CHECK(b.pruned_nouns.empty());
}

TEST_CASE("build_table prunes lonely labels and reports them") {
  std::vector<PairSample> pairs = {{"a", "lie", "trump"}, {"b", "lie", "vote"},
                                   {"c", "win", "trump"}, {"d", "say", "other"}};
  const auto b = build_table(pairs, V{"lie", "win", "say"}, V{"trump", "vote", "mask"});
  CHECK(b.table.row_labels() == V{"lie", "win"});
  CHECK(b.table.col_labels() == V{"trump", "vote"});
  CHECK(b.pruned_verbs == V{"say"});
  CHECK(b.pruned_nouns == V{"mask"});
}

TEST_CASE("build_table rejects degenerate results") {
  std::vector<PairSample> pairs = {{"a", "lie", "trump"}, {"b", "win", "trump"}};
  CHECK(testsupport::error_kind([&] { build_table(pairs, V{"lie", "win"}, V{"trump", "vote"}); }) ==
        ErrorKind::kDegenerateTable);
  CHECK(testsupport::error_kind([&] { build_table({}, V{"lie", "win"}, V{"trump", "vote"}); }) ==
        ErrorKind::kDegenerateTable);
  CHECK(testsupport::error_kind([&] { build_table(pairs, V{}, V{"trump"}); }) ==
        ErrorKind::kInvalidArgument);
}

TEST_CASE("table constructor validation") {
  using T = ContingencyTable;
  CHECK(testsupport::error_kind([] { T({"a", "b"}, {"x", "y"}, {1, 2, 3}); }) ==
        ErrorKind::kInvalidArgument);
  CHECK(testsupport::error_kind([] { T({"a", "b"}, {"x", "y"}, {1, -2, 3, 4}); }) ==
        ErrorKind::kInvalidArgument);
  CHECK(testsupport::error_kind([] { T({"a", "a"}, {"x", "y"}, {1, 2, 3, 4}); }) ==
        ErrorKind::kInvalidArgument);
  CHECK(testsupport::error_kind([] { T({"a", "b"}, {"x", "y"}, {1, 0, 3, 0}); }) ==
        ErrorKind::kInvalidArgument);
  CHECK(T({"a", "b"}, {"x", "y"}, {1, 0, 0, 4}).grand_total() == 5);
}

TEST_CASE("brute-force recount agrees on the fixture corpora") {
  SUBCASE("40-post corpus") {
    check_oracle(narrascope::ingest::read_store(
                     testsupport::fixture("tests/fixtures/corpus40.jsonl")),
                 10);
  }
  SUBCASE("messy corpus") {
    check_oracle(narrascope::ingest::read_store(
                     testsupport::fixture("tests/fixtures/corpus_messy.jsonl")),
                 10);
  }
  SUBCASE("synthetic corpus") { check_oracle(synth_corpus(200), 10); }
  SUBCASE("small k") { check_oracle(synth_corpus(150), 3); }
}

TEST_CASE("the 40-post corpus gives a full 10x10 table") {
  const auto terms = post_terms(narrascope::ingest::read_store(
      testsupport::fixture("tests/fixtures/corpus40.jsonl")));
  const auto top = top_k_terms(terms, 10);
  const auto b = build_table(all_pairs(terms), top.verbs, top.nouns);
  // lie x trump: c40-00, 02, 05 by hand.
  const auto& t = b.table;
  const auto row = std::find(t.row_labels().begin(), t.row_labels().end(), "lie") -
                   t.row_labels().begin();
  const auto col = std::find(t.col_labels().begin(), t.col_labels().end(), "trump") -
                   t.col_labels().begin();
  CHECK(t.count(row, col) == 3);
}

TEST_CASE("post order never changes the table") {
  auto posts = synth_corpus(200);
  const auto terms = post_terms(posts);
  const auto top = top_k_terms(terms, 10);
  const auto base = build_table(all_pairs(terms), top.verbs, top.nouns).table;
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    auto shuffled = terms;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto t2 = top_k_terms(shuffled, 10);
    CHECK(t2 == top);
    auto pairs = all_pairs(shuffled);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    CHECK(build_table(pairs, t2.verbs, t2.nouns).table == base);
  }
}

TEST_CASE("counts are conserved") {
  const auto terms = post_terms(synth_corpus(200));
  const auto top = top_k_terms(terms, 10);
  const auto pairs = all_pairs(terms);
  const auto in_top = std::count_if(pairs.begin(), pairs.end(), [&](const PairSample& p) {
    return std::find(top.verbs.begin(), top.verbs.end(), p.verb) != top.verbs.end() &&
           std::find(top.nouns.begin(), top.nouns.end(), p.noun) != top.nouns.end();
  });
  const auto t = build_table(pairs, top.verbs, top.nouns).table;
  CHECK(t.grand_total() == in_top);
  std::int64_t sum = 0;
  for (auto c : t.counts()) sum += c;
  CHECK(sum == in_top);
}

TEST_CASE("CSV round trip and format") {
  const ContingencyTable t({"lie", "win"}, {"trump", "vote"}, {3, 1, 2, 0});
  CHECK(to_csv(t) == ",trump,vote\nlie,3,1\nwin,2,0\n");
  CHECK(table_from_csv(to_csv(t)) == t);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    const auto r = testsupport::random_table(rng, 2 + i % 5, 2 + i % 7);
    CHECK(table_from_csv(to_csv(r)) == r);
  }
  CHECK(testsupport::error_kind([] { table_from_csv(",a,b\nx,1\n"); }) ==
        ErrorKind::kInvalidArgument);
  CHECK(testsupport::error_kind([] { table_from_csv(",a,b\nx,1,z\ny,1,1\n"); }) ==
        ErrorKind::kInvalidArgument);
  CHECK(testsupport::error_kind([] { table_from_csv(""); }) == ErrorKind::kInvalidArgument);
}
