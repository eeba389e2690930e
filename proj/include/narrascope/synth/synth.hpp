#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "narrascope/ingest/post.hpp"
#include "narrascope/text/annotator.hpp"
#include "json.hpp"

namespace narrascope::synth {

struct WeightedTerm {
  std::string lemma;
  double weight = 1.0;

  bool operator==(const WeightedTerm&) const = default;
};

struct PlantedPair {
  std::string verb;
  std::string noun;
  double rate = 0.0;           // in (0, 1]
  double start_fraction = 0.0;  // active window over post indices
  double end_fraction = 1.0;

  bool operator==(const PlantedPair&) const = default;
};

struct ScenarioSpec {
  std::uint64_t seed = 0;
  std::size_t post_count = 0;
  std::vector<WeightedTerm> background_nouns;
  std::vector<WeightedTerm> background_verbs;
  std::vector<PlantedPair> planted;
  ingest::Timestamp start{};
  ingest::Timestamp end{};
  // Empty = every noun lemma of the scenario.
  std::vector<std::string> search_terms;

  bool operator==(const ScenarioSpec&) const = default;
};

inline constexpr std::string_view kGeneratorId = "mt19937_64";

// Throws Error(kInvalidSpec) on any structural problem or unknown key.
ScenarioSpec parse_scenario(const nlohmann::json& j);
ScenarioSpec load_scenario(const std::filesystem::path& path);

// Verb inflections used by the templates, taken from the lexicon.
struct VerbForms {
  std::string base;
  std::string s;
  std::string ed;
  std::string ing;
};

// A sentence template with one noun slot ({noun} or {Noun}) and one verb
// slot ({verb}, {verb_s}, {verb_ed}, {verb_ing}).
struct Template {
  std::string pattern;

  std::string render(std::string_view noun, const VerbForms& verb) const;
};

// Templates shipped in data/templates.txt.
const std::vector<Template>& bundled_templates();

// Checks ranges, stop-word disjointness and that every template renders
// each (noun, verb) combination so that the tagger recovers exactly that
// noun and verb. Throws Error(kInvalidSpec).
void validate(const ScenarioSpec& spec, const text::PosAnnotator& annotator);

// Post i gets id "synth-<seed>-<i>" and a timestamp spaced evenly over
// [start, end). Each planted pair lands in exactly
// ceil(rate * post_count * (end - start)) posts of its window, no post
// holds two planted pairs, and background posts never form a planted pair.
std::vector<ingest::Post> generate(const ScenarioSpec& spec);
std::vector<ingest::Post> generate(const ScenarioSpec& spec,
                                   const text::PosAnnotator& annotator);

std::size_t planted_post_count(const ScenarioSpec& spec, const PlantedPair& pair);

// Writes `out` as JSONL plus `<out>.meta.json` with generator and seed.
void write_posts(const std::filesystem::path& out, const std::vector<ingest::Post>& posts,
                 const ScenarioSpec& spec);

nlohmann::ordered_json to_json(const ScenarioSpec& spec);

}  // namespace narrascope::synth
