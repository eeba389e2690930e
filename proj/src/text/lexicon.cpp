#include "narrascope/text/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "narrascope/embedded_data.hpp"
#include "narrascope/error.hpp"
#include "narrascope/text/tokenize.hpp"

namespace narrascope::text {

std::string_view to_string(Pos pos) {
  switch (pos) {
    case Pos::kNoun: return "NOUN";
    case Pos::kPropn: return "PROPN";
    case Pos::kVerb: return "VERB";
    case Pos::kOther: return "OTHER";
  }
  return "OTHER";
}

std::optional<Pos> parse_pos(std::string_view name) {
  if (name == "NOUN") return Pos::kNoun;
  if (name == "PROPN") return Pos::kPropn;
  if (name == "VERB") return Pos::kVerb;
  if (name == "OTHER") return Pos::kOther;
  return std::nullopt;
}

Lexicon Lexicon::parse(std::string_view tsv) {
  Lexicon lex;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= tsv.size()) {
    std::size_t eol = tsv.find('\n', pos);
    if (eol == std::string_view::npos) eol = tsv.size();
    std::string_view line = tsv.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    const std::size_t t1 = line.find('\t');
    const std::size_t t2 =
        t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos ||
        line.find('\t', t2 + 1) != std::string_view::npos) {
      throw Error(ErrorKind::kInvalidArgument,
                  "lexicon line " + std::to_string(line_no) +
                      ": expected surface<TAB>pos<TAB>lemma");
    }
    const std::string surface = case_fold(line.substr(0, t1));
    const auto tag = parse_pos(line.substr(t1 + 1, t2 - t1 - 1));
    const std::string lemma = case_fold(line.substr(t2 + 1));
    const bool lemma_ok =
        !lemma.empty() && lemma.find_first_of(" \t") == std::string::npos;
    if (surface.empty() || !tag || !lemma_ok) {
      throw Error(ErrorKind::kInvalidArgument,
                  "lexicon line " + std::to_string(line_no) + ": bad field");
    }
    auto& readings = lex.entries_[surface];
    const bool seen = std::any_of(
        readings.begin(), readings.end(),
        [&](const LexReading& r) { return r.pos == *tag; });
    if (!seen) readings.push_back({*tag, lemma});
  }
  return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kNotFound, "lexicon not found: " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::shared_ptr<const Lexicon> Lexicon::bundled() {
  static const std::shared_ptr<const Lexicon> instance =
      std::make_shared<const Lexicon>(parse(data::bundled_lexicon_tsv()));
  return instance;
}

std::span<const LexReading> Lexicon::readings(
    std::string_view folded_surface) const {
  auto it = entries_.find(folded_surface);
  if (it == entries_.end()) return {};
  return it->second;
}

std::vector<std::string> Lexicon::forms(std::string_view lemma,
                                        Pos pos) const {
  std::vector<std::string> out;
  for (const auto& [surface, readings] : entries_) {
    for (const LexReading& r : readings) {
      if (r.pos == pos && r.lemma == lemma) {
        out.push_back(surface);
        break;
      }
    }
  }
  return out;
}

}  // namespace narrascope::text
