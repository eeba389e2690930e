#include "narrascope/text/annotator.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "narrascope/error.hpp"
#include "narrascope/text/tokenize.hpp"

namespace narrascope::text {
namespace {

// A VERB reading is preferred right after these.
constexpr std::array<std::string_view, 28> kVerbContext = {
    "to",     "will",    "would",    "shall",  "should",   "can",
    "could",  "may",     "might",    "must",   "i",        "you",
    "we",     "they",    "don't",    "didn't", "doesn't",  "won't",
    "can't",  "cannot",  "couldn't", "wouldn't", "shouldn't", "did",
    "do",     "does",    "let's",    "please"};

// A nominal reading is preferred right after these.
constexpr std::array<std::string_view, 19> kNounContext = {
    "the",  "a",     "an",    "my",   "your", "his",  "her",
    "its",  "our",   "their", "this", "that", "these", "those",
    "every", "each", "no",    "some", "any"};

template <std::size_t N>
bool in(const std::array<std::string_view, N>& words, std::string_view w) {
  return std::find(words.begin(), words.end(), w) != words.end();
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.ends_with(suffix);
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool is_consonant(char c) { return c >= 'a' && c <= 'z' && !is_vowel(c); }

// Undoes consonant doubling ("runn" -> "run") and restores a dropped final
// e on short consonant-vowel-consonant stems ("mak" -> "make").
std::string fix_verb_stem(std::string stem) {
  const std::size_t n = stem.size();
  if (n >= 3 && stem[n - 1] == stem[n - 2] && is_consonant(stem[n - 1]) &&
      stem[n - 1] != 'l' && stem[n - 1] != 's' && stem[n - 1] != 'z') {
    stem.pop_back();
    return stem;
  }
  if (n == 3 && is_consonant(stem[0]) && is_vowel(stem[1]) &&
      is_consonant(stem[2]) && stem[2] != 'w' && stem[2] != 'x' &&
      stem[2] != 'y') {
    stem.push_back('e');
  }
  return stem;
}

bool is_numeric(std::string_view s) {
  bool digit = false;
  for (char c : s) {
    if (c >= '0' && c <= '9') {
      digit = true;
    } else if (c != ',' && c != '.') {
      return false;
    }
  }
  return digit;
}

std::string normalize_apostrophes(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    // U+2019 RIGHT SINGLE QUOTATION MARK is E2 80 99 in UTF-8.
    if (i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
        static_cast<unsigned char>(s[i + 1]) == 0x80 &&
        static_cast<unsigned char>(s[i + 2]) == 0x99) {
      out.push_back('\'');
      i += 2;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

const LexReading* pick_reading(std::span<const LexReading> readings,
                               std::string_view previous) {
  auto find = [&](auto pred) -> const LexReading* {
    auto it = std::find_if(readings.begin(), readings.end(), pred);
    return it == readings.end() ? nullptr : &*it;
  };
  if (in(kVerbContext, previous)) {
    if (auto* r = find([](const LexReading& x) { return x.pos == Pos::kVerb; })) {
      return r;
    }
  }
  if (in(kNounContext, previous)) {
    if (auto* r = find([](const LexReading& x) { return is_nominal(x.pos); })) {
      return r;
    }
  }
  return &readings.front();
}

}  // namespace

std::vector<AnnotatedToken> PosAnnotator::annotate(
    std::span<const std::string> tokens) const {
  std::vector<AnnotatedToken> out = tag(tokens);
  if (out.size() != tokens.size()) {
    throw Error(ErrorKind::kTaggerFailure,
                name() + " returned " + std::to_string(out.size()) +
                    " annotations for " + std::to_string(tokens.size()) +
                    " tokens");
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out[i].surface = tokens[i];
    if (is_sigil_token(tokens[i])) {
      out[i].pos = Pos::kPropn;
      out[i].lemma = case_fold(tokens[i]);
    }
  }
  return out;
}

std::string verb_lemma_by_rule(std::string_view w) {
  const std::size_t n = w.size();
  if (n == 5 && ends_with(w, "ying")) return std::string(w.substr(0, 1)) + "ie";
  if (n >= 6 && ends_with(w, "ing")) {
    return fix_verb_stem(std::string(w.substr(0, n - 3)));
  }
  if (n == 4 && ends_with(w, "ied")) return std::string(w.substr(0, 3));
  if (n > 4 && ends_with(w, "ied")) {
    return std::string(w.substr(0, n - 3)) + "y";
  }
  if (n >= 5 && ends_with(w, "eed")) return std::string(w.substr(0, n - 1));
  if (n >= 5 && ends_with(w, "ed")) {
    return fix_verb_stem(std::string(w.substr(0, n - 2)));
  }
  return noun_lemma_by_rule(w);
}

std::string noun_lemma_by_rule(std::string_view w) {
  const std::size_t n = w.size();
  if (ends_with(w, "'s") && n > 2) return std::string(w.substr(0, n - 2));
  if (n == 4 && ends_with(w, "ies")) return std::string(w.substr(0, 3));
  if (n > 4 && ends_with(w, "ies")) {
    return std::string(w.substr(0, n - 3)) + "y";
  }
  if (n > 4 && (ends_with(w, "sses") || ends_with(w, "shes") ||
                ends_with(w, "ches") || ends_with(w, "xes") ||
                ends_with(w, "zzes"))) {
    return std::string(w.substr(0, n - 2));
  }
  if (n > 3 && w.back() == 's' && !ends_with(w, "ss") && !ends_with(w, "us") &&
      !ends_with(w, "is")) {
    return std::string(w.substr(0, n - 1));
  }
  return std::string(w);
}

AnnotatedToken guess_unknown(std::string_view surface) {
  const std::string w = normalize_apostrophes(case_fold(surface));
  const std::size_t n = w.size();
  const bool verb_shaped = (n >= 6 && ends_with(w, "ing")) ||
                           (n == 5 && ends_with(w, "ying")) ||
                           (n >= 5 && ends_with(w, "ed")) ||
                           (n == 4 && ends_with(w, "ied"));
  if (verb_shaped) return {std::string(surface), Pos::kVerb, verb_lemma_by_rule(w)};
  return {std::string(surface), Pos::kNoun, noun_lemma_by_rule(w)};
}

BaselineAnnotator::BaselineAnnotator(std::shared_ptr<const Lexicon> lexicon)
    : lexicon_(std::move(lexicon)) {
  if (!lexicon_) {
    throw Error(ErrorKind::kInvalidArgument, "baseline annotator needs a lexicon");
  }
}

std::vector<AnnotatedToken> BaselineAnnotator::tag(
    std::span<const std::string> tokens) const {
  std::vector<AnnotatedToken> out;
  out.reserve(tokens.size());
  std::string previous;
  for (const std::string& surface : tokens) {
    const std::string folded = normalize_apostrophes(case_fold(surface));
    AnnotatedToken token{surface, Pos::kOther, folded};
    if (is_numeric(folded)) {
      token.pos = Pos::kOther;
    } else if (auto readings = lexicon_->readings(folded); !readings.empty()) {
      const LexReading* r = pick_reading(readings, previous);
      token.pos = r->pos;
      token.lemma = r->lemma;
    } else if (ends_with(folded, "'s") &&
               !lexicon_->readings(folded.substr(0, folded.size() - 2)).empty()) {
      // Possessive of a known word keeps the base word's nominal reading.
      const std::string base = folded.substr(0, folded.size() - 2);
      const auto base_readings = lexicon_->readings(base);
      auto nominal = std::find_if(
          base_readings.begin(), base_readings.end(),
          [](const LexReading& x) { return is_nominal(x.pos); });
      const LexReading& r =
          nominal == base_readings.end() ? base_readings.front() : *nominal;
      token.pos = r.pos;
      token.lemma = r.lemma;
    } else {
      token = guess_unknown(surface);
    }
    previous = folded;
    out.push_back(std::move(token));
  }
  return out;
}

FallbackAnnotator::FallbackAnnotator(
    std::shared_ptr<const PosAnnotator> primary,
    std::shared_ptr<const PosAnnotator> fallback)
    : primary_(std::move(primary)), fallback_(std::move(fallback)) {}

std::string FallbackAnnotator::name() const {
  return primary_->name() + "+" + fallback_->name();
}

std::vector<AnnotatedToken> FallbackAnnotator::tag(
    std::span<const std::string> tokens) const {
  try {
    return primary_->annotate(tokens);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kTaggerFailure) throw;
    return fallback_->annotate(tokens);
  }
}

std::shared_ptr<const PosAnnotator> make_annotator(std::string_view selection) {
  if (selection == "baseline") return std::make_shared<BaselineAnnotator>();
  auto split_argv = [](std::string_view cmd) {
    std::vector<std::string> argv;
    std::istringstream in{std::string(cmd)};
    for (std::string part; in >> part;) argv.push_back(part);
    return argv;
  };
  constexpr std::string_view kStrict = "subprocess:";
  constexpr std::string_view kWithFallback = "subprocess+baseline:";
  if (selection.starts_with(kStrict)) {
    auto argv = split_argv(selection.substr(kStrict.size()));
    if (!argv.empty()) return std::make_shared<SubprocessAnnotator>(argv);
  } else if (selection.starts_with(kWithFallback)) {
    auto argv = split_argv(selection.substr(kWithFallback.size()));
    if (!argv.empty()) {
      return std::make_shared<FallbackAnnotator>(
          std::make_shared<SubprocessAnnotator>(argv),
          std::make_shared<BaselineAnnotator>());
    }
  }
  throw Error(ErrorKind::kInvalidArgument,
              "unknown tagger selection '" + std::string(selection) + "'");
}

}  // namespace narrascope::text
