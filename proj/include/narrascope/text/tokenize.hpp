#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace narrascope::text {

// ASCII case folding; multi-byte UTF-8 sequences pass through unchanged.
std::string case_fold(std::string_view s);

// True for "#tag" / "@handle" shaped tokens.
bool is_sigil_token(std::string_view token);

// Splits on Unicode whitespace, punctuation and symbols (emoji included).
// "#hashtag" and "@handle" stay whole, apostrophes between word characters
// stay inside the token ("I'm"), URLs are dropped, and surface case is kept.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace narrascope::text
