#include "narrascope/ingest/post.hpp"

#include <charconv>
#include <cstdio>

#include "narrascope/error.hpp"

namespace narrascope::ingest {
namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorKind::kMalformedRecord, what);
}

int parse_fixed(std::string_view text, std::size_t pos, std::size_t len) {
  int value = 0;
  const char* first = text.data() + pos;
  const char* last = first + len;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    malformed("bad timestamp: " + std::string(text));
  }
  return value;
}

bool is_blank(std::string_view s) {
  for (char c : s) {
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r' && c != '\f' &&
        c != '\v') {
      return false;
    }
  }
  return true;
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  if (text.size() != 20 || text[4] != '-' || text[7] != '-' ||
      text[10] != 'T' || text[13] != ':' || text[16] != ':' ||
      text[19] != 'Z') {
    malformed("bad timestamp: " + std::string(text));
  }
  const year_month_day date{year{parse_fixed(text, 0, 4)},
                            month{static_cast<unsigned>(parse_fixed(text, 5, 2))},
                            day{static_cast<unsigned>(parse_fixed(text, 8, 2))}};
  const int h = parse_fixed(text, 11, 2);
  const int m = parse_fixed(text, 14, 2);
  const int s = parse_fixed(text, 17, 2);
  if (!date.ok() || h > 23 || m > 59 || s > 59) {
    malformed("bad timestamp: " + std::string(text));
  }
  return sys_days{date} + hours{h} + minutes{m} + seconds{s};
}

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const sys_days day_point = floor<days>(t);
  const year_month_day date{day_point};
  const hh_mm_ss<seconds> tod{t - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()),
                static_cast<unsigned>(date.day()),
                static_cast<int>(tod.hours().count()),
                static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()));
  return buf;
}

nlohmann::ordered_json to_json(const Post& post) {
  nlohmann::ordered_json j;
  j["id"] = post.id;
  j["created_at"] = format_timestamp(post.created_at);
  j["text"] = post.text;
  j["matched_terms"] = post.matched_terms;
  j["source"] = post.source;
  return j;
}

void validate(const Post& post) {
  if (post.id.empty()) malformed("post id is empty");
  if (is_blank(post.text)) malformed("post " + post.id + " has empty text");
  if (post.matched_terms.empty()) {
    malformed("post " + post.id + " has no matched terms");
  }
  if (post.source != "live" && post.source != "replay") {
    malformed("post " + post.id + " has unknown source '" + post.source + "'");
  }
}

Post post_from_json(const nlohmann::json& j) {
  if (!j.is_object()) malformed("record is not a JSON object");
  auto string_field = [&](const char* key) -> std::string {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) {
      malformed(std::string("missing or non-string field '") + key + "'");
    }
    return it->get<std::string>();
  };
  Post post;
  post.id = string_field("id");
  post.created_at = parse_timestamp(string_field("created_at"));
  post.text = string_field("text");
  post.source = string_field("source");
  auto terms = j.find("matched_terms");
  if (terms == j.end() || !terms->is_array()) {
    malformed("missing or non-array field 'matched_terms'");
  }
  for (const auto& t : *terms) {
    if (!t.is_string()) malformed("non-string entry in 'matched_terms'");
    post.matched_terms.push_back(t.get<std::string>());
  }
  validate(post);
  return post;
}

std::string to_jsonl_line(const Post& post) {
  std::string line = to_json(post).dump();
  line.push_back('\n');
  return line;
}

}  // namespace narrascope::ingest
