#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

#include "narrascope/ca/ca.hpp"
#include "narrascope/ingest/post.hpp"
#include "json.hpp"

namespace narrascope::session {

using ingest::Timestamp;

// Half-open [from, to); an unset bound is unbounded.
struct TimeWindow {
  std::optional<Timestamp> from;
  std::optional<Timestamp> to;

  bool is_all() const { return !from && !to; }
  bool contains(Timestamp t) const {
    return (!from || t >= *from) && (!to || t < *to);
  }

  bool operator==(const TimeWindow&) const = default;
};

struct SessionConfig {
  std::string event_name = "event";
  std::filesystem::path store_path;
  TimeWindow window;
  std::size_t k = 10;
  std::size_t dims = 2;
  std::string tagger = "baseline";
  ca::CoordinateMode coordinate_mode = ca::CoordinateMode::kSingularVectors;

  // Throws Error(kInvalidArgument) unless k >= 2 and dims >= 1.
  void validate() const;

  bool operator==(const SessionConfig&) const = default;
};

nlohmann::ordered_json window_to_json(const TimeWindow& window);
TimeWindow window_from_json(const nlohmann::json& j);

nlohmann::ordered_json to_json(const SessionConfig& config);
// Unknown keys are rejected with Error(kInvalidArgument).
SessionConfig config_from_json(const nlohmann::json& j);

}  // namespace narrascope::session
