#include "narrascope/ingest/sources.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <cctype>
#include <set>
#include <unordered_map>
#include <variant>

#include "httplib.h"
#include "narrascope/error.hpp"

namespace narrascope::ingest {
namespace {

constexpr std::string_view kLinePrefix = "line:";

// Builds a post from a raw record, or returns an error description.
std::variant<Post, std::string> raw_record_to_post(
    const nlohmann::json& j, std::span<const std::string> terms,
    std::string_view source) {
  if (!j.is_object()) return std::string("record is not a JSON object");
  for (const char* key : {"id", "created_at", "text"}) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) {
      return std::string("missing or non-string field '") + key + "'";
    }
  }
  Post post;
  post.id = j["id"].get<std::string>();
  post.text = j["text"].get<std::string>();
  post.source = std::string(source);
  try {
    post.created_at = parse_timestamp(j["created_at"].get<std::string>());
  } catch (const Error& e) {
    return std::string(e.what());
  }
  post.matched_terms = {std::string("-")};  // placeholder for validation
  try {
    validate(post);
  } catch (const Error& e) {
    return std::string(e.what());
  }
  post.matched_terms = matching_terms(terms, post.text);
  return post;
}

// Adds `post` to the batch unless its id was already collected this poll.
void merge_into(std::vector<Post>& batch,
                std::unordered_map<std::string, std::size_t>& index,
                Post post) {
  if (post.matched_terms.empty()) return;
  if (!index.contains(post.id)) {
    index.emplace(post.id, batch.size());
    batch.push_back(std::move(post));
  }
}

std::size_t parse_line_cursor(const std::string& token) {
  std::size_t value = 0;
  if (!token.starts_with(kLinePrefix)) {
    throw Error(ErrorKind::kInvalidArgument,
                "not a replay cursor: '" + token + "'");
  }
  const char* first = token.data() + kLinePrefix.size();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw Error(ErrorKind::kInvalidArgument,
                "not a replay cursor: '" + token + "'");
  }
  return value;
}

// Replay position is shared by every term: the furthest cursor seen.
std::size_t replay_position(const CursorMap& cursors) {
  std::size_t pos = 0;
  for (const auto& [term, token] : cursors) {
    pos = std::max(pos, parse_line_cursor(token));
  }
  return pos;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kNotFound,
                "replay file not found: " + path.string());
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos;
       pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

}  // namespace

ReplaySource::ReplaySource(std::filesystem::path path, std::size_t page_size)
    : path_(std::move(path)), page_size_(page_size) {}

PollResult ReplaySource::poll(std::span<const std::string> terms,
                              const CursorMap& cursors) {
  const std::vector<std::string> lines = read_lines(path_);
  const std::size_t begin = std::min(replay_position(cursors), lines.size());
  const std::size_t end =
      page_size_ == 0 ? lines.size() : std::min(lines.size(), begin + page_size_);

  PollResult result;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = begin; i < end; ++i) {
    if (lines[i].find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(lines[i]);
    } catch (const nlohmann::json::exception&) {
      ++result.malformed;
      result.diagnostics.push_back("line " + std::to_string(i + 1) +
                                   ": invalid JSON");
      continue;
    }
    auto parsed = raw_record_to_post(j, terms, "replay");
    if (auto* err = std::get_if<std::string>(&parsed)) {
      ++result.malformed;
      result.diagnostics.push_back("line " + std::to_string(i + 1) + ": " +
                                   *err);
      continue;
    }
    merge_into(result.batch, index, std::get<Post>(std::move(parsed)));
  }

  result.cursors = cursors;
  const std::string token = std::string(kLinePrefix) + std::to_string(end);
  for (const std::string& term : terms) result.cursors[term] = token;
  return result;
}

bool ReplaySource::exhausted(const CursorMap& cursors) const {
  return replay_position(cursors) >= read_lines(path_).size();
}

IngestConfig parse_ingest_config(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kInvalidArgument,
                std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw Error(ErrorKind::kInvalidArgument, "config must be a JSON object");
  }
  static const std::set<std::string> kKnown = {
      "event_name",     "terms",     "endpoint_url_template",
      "auth_token_env", "page_size", "interval_seconds"};
  for (const auto& [key, value] : j.items()) {
    if (!kKnown.contains(key)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "unknown config key '" + key + "'");
    }
  }
  IngestConfig cfg;
  try {
    cfg.event_name = j.value("event_name", std::string("event"));
    cfg.terms = j.value("terms", std::vector<std::string>{});
    cfg.live.endpoint_url_template =
        j.value("endpoint_url_template", std::string());
    cfg.live.auth_token_env = j.value("auth_token_env", std::string());
    cfg.live.page_size = j.value("page_size", std::size_t{100});
    cfg.live.interval_seconds = j.value("interval_seconds", 180.0);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kInvalidArgument,
                std::string("config has a wrongly typed value: ") + e.what());
  }
  if (cfg.live.interval_seconds < 0) {
    throw Error(ErrorKind::kInvalidArgument, "interval_seconds must be >= 0");
  }
  return cfg;
}

IngestConfig load_ingest_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kNotFound, "config not found: " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_ingest_config(ss.str());
}

std::string url_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0x0F]);
    }
  }
  return out;
}

HttpSource::HttpSource(LiveSourceConfig config) : config_(std::move(config)) {
  if (config_.endpoint_url_template.empty()) {
    throw Error(ErrorKind::kInvalidArgument,
                "endpoint_url_template is required for a live source");
  }
}

std::string HttpSource::expand_url(std::string_view term,
                                   std::string_view cursor) const {
  std::string url = config_.endpoint_url_template;
  replace_all(url, "{term}", url_encode(term));
  replace_all(url, "{cursor}", url_encode(cursor));
  replace_all(url, "{page_size}", std::to_string(config_.page_size));
  return url;
}

PollResult HttpSource::poll(std::span<const std::string> terms,
                            const CursorMap& cursors) {
  std::string token;
  if (!config_.auth_token_env.empty()) {
    if (const char* value = std::getenv(config_.auth_token_env.c_str())) {
      token = value;
    }
  }
  PollResult result;
  result.cursors = cursors;
  std::unordered_map<std::string, std::size_t> index;
  for (const std::string& term : terms) {
    auto cursor_it = cursors.find(term);
    const std::string cursor =
        cursor_it == cursors.end() ? std::string() : cursor_it->second;
    const std::string url = expand_url(term, cursor);
    const std::size_t scheme_end = url.find("://");
    const std::size_t path_start =
        scheme_end == std::string::npos ? std::string::npos
                                        : url.find('/', scheme_end + 3);
    if (scheme_end == std::string::npos) {
      throw Error(ErrorKind::kInvalidArgument, "endpoint URL lacks a scheme");
    }
    const std::string base = url.substr(0, path_start);
    const std::string target =
        path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(base);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(30, 0);
    httplib::Headers headers;
    if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);
    const httplib::Result response = client.Get(target, headers);
    if (!response) {
      throw Error(ErrorKind::kSourceUnavailable,
                  "GET " + base + " failed: " +
                      httplib::to_string(response.error()));
    }
    if (response->status != 200) {
      throw Error(ErrorKind::kSourceUnavailable,
                  "GET " + base + " returned HTTP " +
                      std::to_string(response->status));
    }
    nlohmann::json body;
    try {
      body = nlohmann::json::parse(response->body);
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorKind::kSourceUnavailable,
                  "endpoint returned a non-JSON body for term '" + term + "'");
    }
    if (!body.is_array()) {
      throw Error(ErrorKind::kSourceUnavailable,
                  "endpoint returned a non-array body for term '" + term + "'");
    }
    for (const auto& record : body) {
      auto parsed = raw_record_to_post(record, terms, "live");
      if (auto* err = std::get_if<std::string>(&parsed)) {
        ++result.malformed;
        result.diagnostics.push_back("term '" + term + "': " + *err);
        continue;
      }
      Post post = std::get<Post>(std::move(parsed));
      result.cursors[term] = post.id;
      merge_into(result.batch, index, std::move(post));
    }
  }
  return result;
}

PollResult poll_once(Source& source, std::span<const std::string> terms,
                     const CursorMap& cursors) {
  if (terms.empty()) {
    throw Error(ErrorKind::kEmptyTermSet, "cannot poll with no search terms");
  }
  PollResult result = source.poll(terms, cursors);
  for (const Post& post : result.batch) validate(post);
  return result;
}

PollResult poll_once(Source& source, const SearchTermSet& terms,
                     const CursorMap& cursors) {
  return poll_once(source, std::span<const std::string>(terms.terms()),
                   cursors);
}

}  // namespace narrascope::ingest
