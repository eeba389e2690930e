#pragma once

#include <string>
#include <string_view>

#include "narrascope/session/pipeline.hpp"
#include "json.hpp"

namespace narrascope::session {

inline constexpr std::string_view kSnapshotSchemaVersion = "1";

// Pretty-printed JSON (2-space indent) whose floating-point numbers are the
// shortest decimal that round-trips, always carrying a '.' or exponent so
// they re-parse as floats. Keys keep insertion order.
std::string canonical_dump(const nlohmann::ordered_json& doc);

nlohmann::ordered_json snapshot_to_json(const AnalysisSnapshot& snapshot);
// Throws Error(kInvalidArgument) on a wrong schema version or shape.
AnalysisSnapshot snapshot_from_json(const nlohmann::json& doc);

// Byte-deterministic document, newline terminated.
std::string export_snapshot(const AnalysisSnapshot& snapshot);
AnalysisSnapshot import_snapshot(std::string_view document);

}  // namespace narrascope::session
