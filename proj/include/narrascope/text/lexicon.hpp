#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace narrascope::text {

enum class Pos { kNoun, kPropn, kVerb, kOther };

std::string_view to_string(Pos pos);
// Accepts NOUN, PROPN, VERB and OTHER.
std::optional<Pos> parse_pos(std::string_view name);

constexpr bool is_nominal(Pos pos) {
  return pos == Pos::kNoun || pos == Pos::kPropn;
}

struct LexReading {
  Pos pos;
  std::string lemma;

  bool operator==(const LexReading&) const = default;
};

// surface<TAB>pos<TAB>lemma rows keyed by case-folded surface. Readings keep
// file order; a repeated (surface, pos) pair keeps its first lemma.
class Lexicon {
 public:
  // Blank lines and lines starting with '#' are skipped. Throws
  // Error(kInvalidArgument) naming the offending line.
  static Lexicon parse(std::string_view tsv);
  static Lexicon load(const std::filesystem::path& path);

  // Shared instance built from the compiled-in data/lexicon.tsv.
  static std::shared_ptr<const Lexicon> bundled();

  std::span<const LexReading> readings(std::string_view folded_surface) const;

  // Surfaces with a (pos, lemma) reading, sorted.
  std::vector<std::string> forms(std::string_view lemma, Pos pos) const;

  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::vector<LexReading>, std::less<>> entries_;
};

}  // namespace narrascope::text
