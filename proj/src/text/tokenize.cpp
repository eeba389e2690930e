#include "narrascope/text/tokenize.hpp"

#include <cstdint>

namespace narrascope::text {
namespace {

constexpr char32_t kInvalid = 0xFFFD;

struct Decoded {
  char32_t cp;
  std::size_t len;
};

Decoded decode_at(std::string_view s, std::size_t i) {
  const auto byte = [&](std::size_t k) {
    return static_cast<unsigned char>(s[k]);
  };
  const unsigned char b0 = byte(i);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {kInvalid, 1};
  }
  if (i + len > s.size()) return {kInvalid, 1};
  for (std::size_t k = 1; k < len; ++k) {
    const unsigned char b = byte(i + k);
    if ((b & 0xC0) != 0x80) return {kInvalid, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

bool is_space(char32_t cp) {
  return (cp >= 0x09 && cp <= 0x0D) || cp == 0x20 || cp == 0x85 ||
         cp == 0xA0 || cp == 0x1680 || (cp >= 0x2000 && cp <= 0x200A) ||
         cp == 0x2028 || cp == 0x2029 || cp == 0x202F || cp == 0x205F ||
         cp == 0x3000;
}

bool is_apostrophe(char32_t cp) { return cp == U'\'' || cp == 0x2019; }

// Punctuation, symbols, emoji and invisible joiners all separate tokens.
bool is_separator(char32_t cp) {
  if (cp < 0x80) {
    const bool alnum = (cp >= U'0' && cp <= U'9') ||
                       (cp >= U'a' && cp <= U'z') ||
                       (cp >= U'A' && cp <= U'Z') || cp == U'_';
    return !alnum;
  }
  return cp == kInvalid || (cp >= 0x80 && cp <= 0xBF) || cp == 0xD7 ||
         cp == 0xF7 || (cp >= 0x2000 && cp <= 0x2BFF) ||
         (cp >= 0x2E00 && cp <= 0x2E7F) || (cp >= 0x3000 && cp <= 0x303F) ||
         (cp >= 0xFE00 && cp <= 0xFE0F) || (cp >= 0xFE30 && cp <= 0xFE4F) ||
         (cp >= 0xFF00 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20) ||
         (cp >= 0x1F000 && cp <= 0x1FAFF) || (cp >= 0xE0000 && cp <= 0xE007F);
}

bool is_word_char(char32_t cp) { return !is_space(cp) && !is_separator(cp); }

bool starts_url(std::string_view s) {
  const std::string head = case_fold(s.substr(0, 8));
  return head.starts_with("http://") || head.starts_with("https://") ||
         head.starts_with("www.");
}

void tokenize_chunk(std::string_view chunk, std::vector<std::string>& out) {
  std::size_t i = 0;
  while (i < chunk.size()) {
    if (starts_url(chunk.substr(i))) return;  // URL runs to the chunk end
    const Decoded d = decode_at(chunk, i);
    const bool sigil = (d.cp == U'#' || d.cp == U'@') &&
                       i + 1 < chunk.size() &&
                       is_word_char(decode_at(chunk, i + 1).cp);
    if (!sigil && !is_word_char(d.cp)) {
      i += d.len;
      continue;
    }
    const std::size_t start = i;
    i += d.len;
    while (i < chunk.size()) {
      const Decoded next = decode_at(chunk, i);
      if (is_word_char(next.cp)) {
        i += next.len;
        continue;
      }
      // Apostrophe joins two word runs in plain words ("I'm", "don't").
      if (!sigil && is_apostrophe(next.cp) && i + next.len < chunk.size() &&
          is_word_char(decode_at(chunk, i + next.len).cp)) {
        i += next.len;
        continue;
      }
      break;
    }
    out.emplace_back(chunk.substr(start, i - start));
  }
}

}  // namespace

std::string case_fold(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool is_sigil_token(std::string_view token) {
  return token.size() > 1 && (token.front() == '#' || token.front() == '@');
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const Decoded d = decode_at(text, i);
    if (is_space(d.cp)) {
      i += d.len;
      continue;
    }
    const std::size_t start = i;
    while (i < text.size()) {
      const Decoded next = decode_at(text, i);
      if (is_space(next.cp)) break;
      i += next.len;
    }
    tokenize_chunk(text.substr(start, i - start), out);
  }
  return out;
}

}  // namespace narrascope::text
