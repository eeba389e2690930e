#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace narrascope::ingest {

using Timestamp = std::chrono::sys_seconds;

// "2020-10-07T21:14:03Z". Throws Error(kMalformedRecord) on anything else.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp t);

struct Post {
  std::string id;
  Timestamp created_at{};
  std::string text;
  std::vector<std::string> matched_terms;
  std::string source;  // "live" | "replay"

  bool operator==(const Post&) const = default;
};

// Field order is fixed: id, created_at, text, matched_terms, source.
nlohmann::ordered_json to_json(const Post& post);

// Strict parse of a stored record; every field required and validated.
// Throws Error(kMalformedRecord).
Post post_from_json(const nlohmann::json& j);

// Serialized JSON followed by a single '\n'.
std::string to_jsonl_line(const Post& post);

// Throws Error(kMalformedRecord) if a Post invariant does not hold.
void validate(const Post& post);

}  // namespace narrascope::ingest
