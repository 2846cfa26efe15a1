#pragma once

#include <string>

#include <json.hpp>

#include "mm/pipeline.hpp"

namespace mm {

// JSON forms of the configuration types. Parsing accepts partial objects:
// missing fields keep their defaults, mistyped or invalid fields raise
// ConfigError with the dotted field path.
nlohmann::ordered_json to_json(const MarkerTemplate& t);
nlohmann::ordered_json to_json(const DetectorConfig& c);
nlohmann::ordered_json to_json(const KalmanConfig& c);
nlohmann::ordered_json to_json(const GestureConfig& c);
nlohmann::ordered_json to_json(const EngineConfig& c);

MarkerTemplate template_from_json(const nlohmann::ordered_json& j, const MarkerTemplate& base, const std::string& path);
EngineConfig engine_config_from_json(const nlohmann::ordered_json& j);

/// Reads and validates an engine configuration file.
EngineConfig load_engine_config(const std::string& path);

/// One report as a JSON object. `elapsed` is wall-clock and is left out unless
/// `include_timing` is set, so that untimed serialisations are reproducible.
nlohmann::ordered_json to_json(const FrameReport& r, bool include_timing);

/// Compact single-line form of the above, without trailing newline.
std::string report_line(const FrameReport& r, bool include_timing);

}  // namespace mm
