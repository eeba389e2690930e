#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "narrascope/ca/ca.hpp"
#include "narrascope/cooccur/cooccur.hpp"
#include "narrascope/ingest/post.hpp"
#include "narrascope/session/config.hpp"
#include "narrascope/simd/kernels.hpp"
#include "narrascope/text/annotator.hpp"
#include "narrascope/text/filter.hpp"

namespace narrascope::session {

using text::LemmaSet;

struct Candidate {
  std::string verb;
  std::string noun;
  double score = 0.0;
  double cosine = 0.0;
  double verb_norm = 0.0;
  double noun_norm = 0.0;

  bool operator==(const Candidate&) const = default;
};

struct PrunedTerm {
  std::string lemma;
  std::string role;  // "verb" or "noun"

  bool operator==(const PrunedTerm&) const = default;
};

// Analysis parameters echoed into every snapshot so it can be re-run.
struct AnalysisParams {
  TimeWindow window;
  std::size_t k = 10;
  std::size_t dims = 2;
  std::string tagger = "baseline";
  ca::CoordinateMode coordinate_mode = ca::CoordinateMode::kSingularVectors;

  bool operator==(const AnalysisParams&) const = default;
};

AnalysisParams params_of(const SessionConfig& config);

struct AnalysisSnapshot {
  std::uint64_t sequence_number = 0;
  // Latest created_at among the analyzed posts; keeps exports a pure
  // function of the inputs.
  Timestamp created_at{};
  std::size_t post_count = 0;    // posts inside the window
  std::size_t store_prefix = 0;  // store records read for this run
  AnalysisParams params;
  LemmaSet exclusions_in_effect;
  cooccur::ContingencyTable table;
  ca::CAResult ca;
  double plot_radius = 0.0;
  std::vector<Candidate> candidates;
  std::vector<PrunedTerm> pruned_terms;

  bool operator==(const AnalysisSnapshot&) const = default;
};

// Largest norm over all row and column points.
double plot_radius(const ca::CAResult& result);

// narrative_score for every verb x noun pair, sorted by score descending,
// ties by (verb, noun).
std::vector<Candidate> rank_candidates(const cooccur::ContingencyTable& table,
                                       const ca::CAResult& result);

// textpipe -> cooccur -> ca_engine over `posts` (a store prefix). The
// sequence number is left at 0 for the caller to assign. dims is clamped to
// the table's rank bound min(R, C). Throws Error(kInsufficientVocabulary)
// or Error(kDegenerateTable) when the data is too sparse.
AnalysisSnapshot analyze_posts(
    std::span<const ingest::Post> posts, const AnalysisParams& params,
    const LemmaSet& exclusions, const text::PosAnnotator& annotator,
    const simd::KernelTable& kernels = simd::active_kernels());

// Case-folds and trims, dropping blanks.
LemmaSet normalize_exclusions(std::span<const std::string> terms);

}  // namespace narrascope::session
