#include "narrascope/session/config.hpp"

#include <set>

#include "narrascope/error.hpp"

namespace narrascope::session {
namespace {

[[noreturn]] void bad_config(const std::string& what) {
  throw Error(ErrorKind::kInvalidArgument, what);
}

std::optional<Timestamp> bound_from_json(const nlohmann::json& j,
                                         const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) bad_config(std::string("window.") + key + " must be a timestamp");
  try {
    return ingest::parse_timestamp(it->get<std::string>());
  } catch (const Error& e) {
    bad_config(e.what());
  }
}

}  // namespace

void SessionConfig::validate() const {
  if (k < 2) bad_config("k must be at least 2");
  if (dims < 1) bad_config("dims must be at least 1");
}

nlohmann::ordered_json window_to_json(const TimeWindow& window) {
  nlohmann::ordered_json j;
  j["from"] = window.from ? nlohmann::ordered_json(ingest::format_timestamp(*window.from))
                          : nlohmann::ordered_json(nullptr);
  j["to"] = window.to ? nlohmann::ordered_json(ingest::format_timestamp(*window.to))
                      : nlohmann::ordered_json(nullptr);
  return j;
}

TimeWindow window_from_json(const nlohmann::json& j) {
  if (j.is_string() && j.get<std::string>() == "all") return {};
  if (!j.is_object()) bad_config("window must be \"all\" or {from, to}");
  for (const auto& [key, value] : j.items()) {
    if (key != "from" && key != "to") bad_config("unknown window key '" + key + "'");
  }
  return {bound_from_json(j, "from"), bound_from_json(j, "to")};
}

nlohmann::ordered_json to_json(const SessionConfig& config) {
  nlohmann::ordered_json j;
  j["event_name"] = config.event_name;
  j["store_path"] = config.store_path.string();
  j["window"] = window_to_json(config.window);
  j["k"] = config.k;
  j["dims"] = config.dims;
  j["tagger"] = config.tagger;
  j["coordinate_mode"] = std::string(ca::to_string(config.coordinate_mode));
  return j;
}

SessionConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) bad_config("session config must be an object");
  static const std::set<std::string> kKnown = {
      "event_name", "store_path", "window",         "k",
      "dims",       "tagger",     "coordinate_mode"};
  for (const auto& [key, value] : j.items()) {
    if (!kKnown.contains(key)) bad_config("unknown config key '" + key + "'");
  }
  SessionConfig config;
  try {
    config.event_name = j.value("event_name", config.event_name);
    config.store_path = j.value("store_path", std::string());
    if (j.contains("window")) config.window = window_from_json(j["window"]);
    config.k = j.value("k", config.k);
    config.dims = j.value("dims", config.dims);
    config.tagger = j.value("tagger", config.tagger);
    const std::string mode = j.value("coordinate_mode", std::string("singular_vectors"));
    const auto parsed = ca::parse_coordinate_mode(mode);
    if (!parsed) bad_config("unknown coordinate_mode '" + mode + "'");
    config.coordinate_mode = *parsed;
  } catch (const nlohmann::json::exception& e) {
    bad_config(std::string("session config has a wrongly typed value: ") + e.what());
  }
  config.validate();
  return config;
}

}  // namespace narrascope::session
