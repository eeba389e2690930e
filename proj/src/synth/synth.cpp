#include "narrascope/synth/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "narrascope/embedded_data.hpp"
#include "narrascope/error.hpp"
#include "narrascope/ingest/search_terms.hpp"
#include "narrascope/session/session.hpp"
#include "narrascope/text/filter.hpp"
#include "narrascope/text/lexicon.hpp"
#include "narrascope/text/tokenize.hpp"

namespace narrascope::synth {
namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorKind::kInvalidSpec, what);
}

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known,
                    const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) invalid("unknown key '" + key + "' in " + where);
  }
}

std::vector<WeightedTerm> terms_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) invalid(std::string(what) + " must be an array");
  std::vector<WeightedTerm> out;
  for (const auto& e : j) {
    if (e.is_string()) {
      out.push_back({e.get<std::string>(), 1.0});
    } else if (e.is_object()) {
      reject_unknown(e, {"lemma", "weight"}, what);
      out.push_back({e.at("lemma").get<std::string>(), e.value("weight", 1.0)});
    } else {
      invalid(std::string(what) + " entries must be strings or {lemma, weight}");
    }
  }
  return out;
}

// Uniform double in [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)));
}

std::size_t weighted_index(std::mt19937_64& rng, const std::vector<double>& cumulative) {
  const double u = uniform01(rng) * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                               cumulative.size() - 1);
}

std::vector<double> cumulative_weights(const std::vector<WeightedTerm>& terms) {
  std::vector<double> c;
  double acc = 0.0;
  for (const auto& t : terms) c.push_back(acc += t.weight);
  return c;
}

VerbForms verb_forms(const text::Lexicon& lex, const std::string& lemma) {
  VerbForms f{lemma, {}, {}, {}};
  for (const auto& form : lex.forms(lemma, text::Pos::kVerb)) {
    if (form == lemma) continue;
    const bool ing = form.size() > 3 && form.ends_with("ing");
    const bool s = form == lemma + "s" || form == lemma + "es" ||
                   (lemma.ends_with("y") && form == lemma.substr(0, lemma.size() - 1) + "ies");
    if (ing && f.ing.empty()) {
      f.ing = form;
    } else if (s && f.s.empty()) {
      f.s = form;
    } else if (!ing && !s && f.ed.empty()) {
      f.ed = form;
    }
  }
  if (f.s.empty() || f.ed.empty() || f.ing.empty()) {
    invalid("verb '" + lemma + "' lacks inflected forms in the bundled lexicon");
  }
  return f;
}

bool has_nominal_reading(const text::Lexicon& lex, const std::string& lemma) {
  for (const auto& r : lex.readings(lemma)) {
    if (text::is_nominal(r.pos) && r.lemma == lemma) return true;
  }
  return false;
}

std::string capitalize(std::string_view s) {
  std::string out(s);
  if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 32);
  return out;
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos;
       pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

std::vector<std::string> noun_lemmas(const ScenarioSpec& spec) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& p : spec.planted) {
    if (seen.insert(p.noun).second) out.push_back(p.noun);
  }
  for (const auto& n : spec.background_nouns) {
    if (seen.insert(n.lemma).second) out.push_back(n.lemma);
  }
  return out;
}

std::vector<std::string> verb_lemmas(const ScenarioSpec& spec) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& p : spec.planted) {
    if (seen.insert(p.verb).second) out.push_back(p.verb);
  }
  for (const auto& v : spec.background_verbs) {
    if (seen.insert(v.lemma).second) out.push_back(v.lemma);
  }
  return out;
}

}  // namespace

std::string Template::render(std::string_view noun, const VerbForms& verb) const {
  std::string out = pattern;
  replace_all(out, "{Noun}", capitalize(noun));
  replace_all(out, "{noun}", noun);
  replace_all(out, "{verb_s}", verb.s);
  replace_all(out, "{verb_ed}", verb.ed);
  replace_all(out, "{verb_ing}", verb.ing);
  replace_all(out, "{verb}", verb.base);
  return out;
}

const std::vector<Template>& bundled_templates() {
  static const std::vector<Template> templates = [] {
    std::vector<Template> out;
    std::istringstream in{std::string(data::bundled_templates_txt())};
    for (std::string line; std::getline(in, line);) {
      if (line.empty() || line[0] == '#') continue;
      out.push_back({line});
    }
    return out;
  }();
  return templates;
}

ScenarioSpec parse_scenario(const nlohmann::json& j) {
  if (!j.is_object()) invalid("scenario must be a JSON object");
  reject_unknown(j, {"seed", "post_count", "time_range", "background", "planted",
                     "search_terms"},
                 "scenario");
  ScenarioSpec spec;
  try {
    spec.seed = j.at("seed").get<std::uint64_t>();
    const auto count = j.at("post_count").get<std::int64_t>();
    if (count < 1) invalid("post_count must be at least 1");
    spec.post_count = static_cast<std::size_t>(count);

    const auto& range = j.at("time_range");
    reject_unknown(range, {"start", "end"}, "time_range");
    spec.start = ingest::parse_timestamp(range.at("start").get<std::string>());
    spec.end = ingest::parse_timestamp(range.at("end").get<std::string>());

    const auto& bg = j.at("background");
    reject_unknown(bg, {"nouns", "verbs"}, "background");
    spec.background_nouns = terms_from_json(bg.at("nouns"), "background.nouns");
    spec.background_verbs = terms_from_json(bg.at("verbs"), "background.verbs");

    for (const auto& p : j.value("planted", nlohmann::json::array())) {
      reject_unknown(p, {"verb", "noun", "rate", "start", "end"}, "planted");
      spec.planted.push_back({p.at("verb").get<std::string>(),
                              p.at("noun").get<std::string>(),
                              p.at("rate").get<double>(), p.value("start", 0.0),
                              p.value("end", 1.0)});
    }
    spec.search_terms = j.value("search_terms", std::vector<std::string>{});
  } catch (const nlohmann::json::exception& e) {
    invalid(std::string("malformed scenario: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kInvalidSpec) throw;
    invalid(e.what());
  }
  return spec;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kNotFound, "scenario not found: " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    invalid(path.string() + ": " + e.what());
  }
  return parse_scenario(j);
}

std::size_t planted_post_count(const ScenarioSpec& spec, const PlantedPair& pair) {
  const double want = pair.rate * static_cast<double>(spec.post_count) *
                      (pair.end_fraction - pair.start_fraction);
  // Guard against 0.2 * 1000 landing a hair above 200.
  return static_cast<std::size_t>(std::ceil(want - 1e-9));
}

void validate(const ScenarioSpec& spec, const text::PosAnnotator& annotator) {
  if (spec.post_count < 1) invalid("post_count must be at least 1");
  if (spec.end <= spec.start) invalid("time_range end must follow start");
  if (spec.background_nouns.empty() || spec.background_verbs.empty()) {
    invalid("background needs at least one noun and one verb");
  }
  for (const auto* list : {&spec.background_nouns, &spec.background_verbs}) {
    for (const auto& t : *list) {
      if (!(t.weight > 0.0) || !std::isfinite(t.weight)) {
        invalid("weight of '" + t.lemma + "' must be positive");
      }
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> windows;
  std::set<std::pair<std::string, std::string>> planted_pairs;
  for (const auto& p : spec.planted) {
    if (!(p.rate > 0.0 && p.rate <= 1.0)) {
      invalid("planted rate for (" + p.verb + ", " + p.noun + ") must be in (0, 1]");
    }
    if (!(p.start_fraction >= 0.0 && p.start_fraction < p.end_fraction &&
          p.end_fraction <= 1.0)) {
      invalid("planted window for (" + p.verb + ", " + p.noun + ") must satisfy 0 <= start < end <= 1");
    }
    if (!planted_pairs.insert({p.verb, p.noun}).second) {
      invalid("planted pair (" + p.verb + ", " + p.noun + ") listed twice");
    }
  }

  const auto lex = text::Lexicon::bundled();
  const auto stop = text::bundled_stopwords();
  const auto nouns = noun_lemmas(spec);
  const auto verbs = verb_lemmas(spec);
  for (const auto& n : nouns) {
    if (n != text::case_fold(n)) invalid("noun '" + n + "' must be lower case");
    if (stop->contains(n)) invalid("noun '" + n + "' is a stop word");
    if (!has_nominal_reading(*lex, n)) invalid("noun '" + n + "' is not a bundled lexicon noun");
  }
  std::vector<VerbForms> forms;
  for (const auto& v : verbs) {
    if (v != text::case_fold(v)) invalid("verb '" + v + "' must be lower case");
    if (stop->contains(v)) invalid("verb '" + v + "' is a stop word");
    forms.push_back(verb_forms(*lex, v));
  }

  text::FilterConfig filter;
  for (const auto& t : bundled_templates()) {
    for (const auto& n : nouns) {
      for (const auto& f : forms) {
        const auto sentence = t.render(n, f);
        const auto got = text::relevant_terms(sentence, annotator, filter);
        if (got.nouns != text::LemmaSet{n} || got.verbs != text::LemmaSet{f.base}) {
          invalid("template '" + t.pattern + "' does not tag (" + f.base + ", " + n +
                  ") as expected in \"" + sentence + "\"");
        }
      }
    }
  }

  if (!spec.search_terms.empty()) {
    for (const auto& n : nouns) {
      if (std::none_of(spec.search_terms.begin(), spec.search_terms.end(),
                       [&](const std::string& term) { return ingest::term_matches(term, n); })) {
        invalid("search_terms do not match noun '" + n + "'; its posts would never be collected");
      }
    }
  }
}

std::vector<ingest::Post> generate(const ScenarioSpec& spec) {
  text::BaselineAnnotator annotator;
  return generate(spec, annotator);
}

std::vector<ingest::Post> generate(const ScenarioSpec& spec,
                                   const text::PosAnnotator& annotator) {
  validate(spec, annotator);
  const std::size_t n = spec.post_count;
  std::mt19937_64 rng(spec.seed);
  const auto lex = text::Lexicon::bundled();
  const auto& templates = bundled_templates();

  // Planted slots: disjoint random subsets of each pair's index window.
  std::vector<int> slot(n, -1);
  for (std::size_t p = 0; p < spec.planted.size(); ++p) {
    const auto& pair = spec.planted[p];
    const auto lo = static_cast<std::size_t>(std::floor(pair.start_fraction * static_cast<double>(n)));
    const auto hi = std::min(n, static_cast<std::size_t>(std::ceil(pair.end_fraction * static_cast<double>(n))));
    std::vector<std::size_t> free;
    for (std::size_t i = lo; i < hi; ++i) {
      if (slot[i] < 0) free.push_back(i);
    }
    const std::size_t need = planted_post_count(spec, pair);
    if (need > free.size()) {
      invalid("planted pair (" + pair.verb + ", " + pair.noun + ") needs " +
              std::to_string(need) + " posts but only " + std::to_string(free.size()) +
              " are free in its window");
    }
    for (std::size_t i = 0; i < need; ++i) {
      std::swap(free[i], free[i + uniform_index(rng, free.size() - i)]);
      slot[free[i]] = static_cast<int>(p);
    }
  }

  std::set<std::pair<std::string, std::string>> planted_pairs;
  for (const auto& p : spec.planted) planted_pairs.insert({p.verb, p.noun});

  const auto noun_cdf = cumulative_weights(spec.background_nouns);
  const auto verb_cdf = cumulative_weights(spec.background_verbs);
  std::map<std::string, VerbForms> forms_cache;
  const auto forms_of = [&](const std::string& v) -> const VerbForms& {
    auto it = forms_cache.find(v);
    if (it == forms_cache.end()) it = forms_cache.emplace(v, verb_forms(*lex, v)).first;
    return it->second;
  };

  const std::vector<std::string> search =
      spec.search_terms.empty() ? noun_lemmas(spec) : spec.search_terms;
  const auto span_s = (spec.end - spec.start).count();

  std::vector<ingest::Post> posts;
  posts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string noun;
    std::string verb;
    if (slot[i] >= 0) {
      noun = spec.planted[static_cast<std::size_t>(slot[i])].noun;
      verb = spec.planted[static_cast<std::size_t>(slot[i])].verb;
    } else {
      for (int attempt = 0;; ++attempt) {
        if (attempt == 1000) invalid("background vocabulary only forms planted pairs");
        noun = spec.background_nouns[weighted_index(rng, noun_cdf)].lemma;
        verb = spec.background_verbs[weighted_index(rng, verb_cdf)].lemma;
        if (!planted_pairs.contains({verb, noun})) break;
      }
    }
    const auto& t = templates[uniform_index(rng, templates.size())];

    ingest::Post post;
    post.id = "synth-" + std::to_string(spec.seed) + "-" + std::to_string(i);
    // Split the multiplication to stay in range for long spans.
    const auto span = static_cast<std::int64_t>(span_s);
    const auto nn = static_cast<std::int64_t>(n);
    const auto ii = static_cast<std::int64_t>(i);
    const std::int64_t offset = (span / nn) * ii + (span % nn) * ii / nn;
    post.created_at = spec.start + std::chrono::seconds(offset);
    post.text = t.render(noun, forms_of(verb));
    post.matched_terms = ingest::matching_terms(search, post.text);
    post.source = "replay";
    if (post.matched_terms.empty()) {
      invalid("post " + post.id + " matches no search term");
    }
    posts.push_back(std::move(post));
  }
  return posts;
}

void write_posts(const std::filesystem::path& out, const std::vector<ingest::Post>& posts,
                 const ScenarioSpec& spec) {
  std::string body;
  for (const auto& p : posts) body += ingest::to_jsonl_line(p);
  session::write_file_atomic(out, body);

  nlohmann::ordered_json meta;
  meta["generator"] = std::string(kGeneratorId);
  meta["seed"] = spec.seed;
  meta["post_count"] = posts.size();
  meta["scenario"] = to_json(spec);
  session::write_file_atomic(out.string() + ".meta.json", meta.dump(2) + "\n");
}

nlohmann::ordered_json to_json(const ScenarioSpec& spec) {
  nlohmann::ordered_json j;
  j["seed"] = spec.seed;
  j["post_count"] = spec.post_count;
  j["time_range"] = {{"start", ingest::format_timestamp(spec.start)},
                     {"end", ingest::format_timestamp(spec.end)}};
  const auto terms = [](const std::vector<WeightedTerm>& list) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto& t : list) a.push_back({{"lemma", t.lemma}, {"weight", t.weight}});
    return a;
  };
  j["background"] = {{"nouns", terms(spec.background_nouns)},
                     {"verbs", terms(spec.background_verbs)}};
  j["planted"] = nlohmann::ordered_json::array();
  for (const auto& p : spec.planted) {
    j["planted"].push_back({{"verb", p.verb},
                            {"noun", p.noun},
                            {"rate", p.rate},
                            {"start", p.start_fraction},
                            {"end", p.end_fraction}});
  }
  if (!spec.search_terms.empty()) j["search_terms"] = spec.search_terms;
  return j;
}

}  // namespace narrascope::synth
