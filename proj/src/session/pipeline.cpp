#include "narrascope/session/pipeline.hpp"

#include <algorithm>

#include "narrascope/error.hpp"
#include "narrascope/text/tokenize.hpp"

namespace narrascope::session {

AnalysisParams params_of(const SessionConfig& config) {
  return {config.window, config.k, config.dims, config.tagger,
          config.coordinate_mode};
}

double plot_radius(const ca::CAResult& result) {
  double radius = 0.0;
  for (std::size_t i = 0; i < result.row_coords.rows(); ++i) {
    radius = std::max(radius, ca::norm(result.row_coords.row(i)));
  }
  for (std::size_t j = 0; j < result.col_coords.rows(); ++j) {
    radius = std::max(radius, ca::norm(result.col_coords.row(j)));
  }
  return radius;
}

std::vector<Candidate> rank_candidates(const cooccur::ContingencyTable& table,
                                       const ca::CAResult& result) {
  const double radius = plot_radius(result);
  std::vector<Candidate> out;
  out.reserve(table.rows() * table.cols());
  for (std::size_t i = 0; i < table.rows(); ++i) {
    const auto verb = result.row_coords.row(i);
    const double verb_norm = ca::norm(verb);
    for (std::size_t j = 0; j < table.cols(); ++j) {
      const auto noun = result.col_coords.row(j);
      Candidate c;
      c.verb = table.row_labels()[i];
      c.noun = table.col_labels()[j];
      c.cosine = ca::association_cosine(verb, noun);
      c.verb_norm = verb_norm;
      c.noun_norm = ca::norm(noun);
      c.score = ca::narrative_score(verb, noun, radius);
      out.push_back(std::move(c));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.verb != b.verb) return a.verb < b.verb;
    return a.noun < b.noun;
  });
  return out;
}

AnalysisSnapshot analyze_posts(std::span<const ingest::Post> posts,
                               const AnalysisParams& params,
                               const LemmaSet& exclusions,
                               const text::PosAnnotator& annotator,
                               const simd::KernelTable& kernels) {
  if (params.k < 2) throw Error(ErrorKind::kInvalidArgument, "k must be at least 2");
  if (params.dims < 1) throw Error(ErrorKind::kInvalidArgument, "dims must be at least 1");

  AnalysisSnapshot snap;
  snap.store_prefix = posts.size();
  snap.params = params;
  snap.exclusions_in_effect = exclusions;

  text::FilterConfig filter;
  filter.exclusions = exclusions;

  std::vector<cooccur::PostTerms> terms;
  std::vector<cooccur::PairSample> pairs;
  for (const auto& post : posts) {
    if (!params.window.contains(post.created_at)) continue;
    ++snap.post_count;
    snap.created_at = std::max(snap.created_at, post.created_at);
    auto relevant = text::relevant_terms(post.text, annotator, filter);
    auto sample = cooccur::extract_pairs(post.id, relevant.nouns, relevant.verbs);
    pairs.insert(pairs.end(), std::make_move_iterator(sample.begin()),
                 std::make_move_iterator(sample.end()));
    terms.push_back({post.id, std::move(relevant.nouns), std::move(relevant.verbs)});
  }

  const auto top = cooccur::top_k_terms(terms, params.k);
  auto built = cooccur::build_table(pairs, top.verbs, top.nouns);
  for (auto& v : built.pruned_verbs) snap.pruned_terms.push_back({std::move(v), "verb"});
  for (auto& n : built.pruned_nouns) snap.pruned_terms.push_back({std::move(n), "noun"});
  snap.table = std::move(built.table);

  const auto residuals = ca::residual_matrix(snap.table, kernels);
  const std::size_t rank_bound = std::min(snap.table.rows(), snap.table.cols());
  snap.ca = ca::decompose(residuals, std::min(params.dims, rank_bound),
                          params.coordinate_mode, kernels);
  snap.plot_radius = plot_radius(snap.ca);
  snap.candidates = rank_candidates(snap.table, snap.ca);
  return snap;
}

LemmaSet normalize_exclusions(std::span<const std::string> terms) {
  LemmaSet out;
  for (const auto& t : terms) {
    auto folded = text::case_fold(t);
    const auto first = folded.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) continue;
    const auto last = folded.find_last_not_of(" \t\r\n");
    out.insert(folded.substr(first, last - first + 1));
  }
  return out;
}

}  // namespace narrascope::session
