#pragma once

#include <string_view>

namespace narrascope::data {

// Contents of data/lexicon.tsv, data/smart_stopwords.txt and
// data/templates.txt, compiled in at build time.
std::string_view bundled_lexicon_tsv();
std::string_view bundled_stopwords_txt();
std::string_view bundled_templates_txt();

}  // namespace narrascope::data
