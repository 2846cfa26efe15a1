#include "mm/serialize.hpp"

#include <fstream>
#include <sstream>

#include "mm/errors.hpp"

namespace mm {

using json = nlohmann::ordered_json;

namespace {

template <typename T>
void read_field(const json& j, const char* key, T& out, const std::string& path) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(path.empty() ? std::string(key) : path + "." + key, e.what());
  }
}

// Rejects keys that `reference` (a serialized default) does not have.
void reject_unknown(const json& j, const json& reference, const std::string& path) {
  if (!j.is_object() || !reference.is_object()) return;
  for (const auto& [key, value] : j.items()) {
    const std::string field = path.empty() ? key : path + "." + key;
    if (!reference.contains(key)) throw ConfigError(field, "unknown field");
    reject_unknown(value, reference[key], field);
  }
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
}

json point(PointD p) { return json::array({p.x, p.y}); }
json point(PointI p) { return json::array({p.x, p.y}); }

}  // namespace

json to_json(const MarkerTemplate& t) {
  return {{"color", std::string(to_string(t.color))},
          {"ref_hue", t.ref_hue},
          {"ref_sat", t.ref_sat},
          {"mask_width", t.mask_width},
          {"mask_height", t.mask_height},
          {"w1", t.w1},
          {"w2", t.w2}};
}

json to_json(const DetectorConfig& c) {
  return {{"stride", c.stride},
          {"response_threshold", c.response_threshold},
          {"area_min", c.area_min},
          {"area_max", c.area_max},
          {"search_window_half", c.search_window_half},
          {"region_color_tol", c.region_color_tol}};
}

json to_json(const KalmanConfig& c) {
  return {{"process_noise", c.process_noise},
          {"measurement_noise", c.measurement_noise},
          {"max_misses", c.max_misses},
          {"initial_variance", c.initial_variance}};
}

json to_json(const GestureConfig& c) {
  return {{"dwell_time", c.dwell_time},
          {"dwell_radius", c.dwell_radius},
          {"move_threshold", c.move_threshold},
          {"zoom_threshold", c.zoom_threshold},
          {"axis_dominance", c.axis_dominance}};
}

json to_json(const EngineConfig& c) {
  return {{"red_template", to_json(c.red_template)},
          {"green_template", to_json(c.green_template)},
          {"detector", to_json(c.detector)},
          {"kalman", to_json(c.kalman)},
          {"gestures", to_json(c.gestures)},
          {"screen", {{"width", c.screen.width}, {"height", c.screen.height}}},
          {"frame_budget", c.frame_budget},
          {"raw_positions", c.raw_positions}};
}

MarkerTemplate template_from_json(const json& j, const MarkerTemplate& base, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, to_json(base), path);
  MarkerTemplate t = base;
  if (j.contains("color")) {
    std::string c;
    read_field(j, "color", c, path);
    if (c == "red") t.color = MarkerColor::Red;
    else if (c == "green") t.color = MarkerColor::Green;
    else throw ConfigError(path + ".color", "expected \"red\" or \"green\"");
  }
  read_field(j, "ref_hue", t.ref_hue, path);
  read_field(j, "ref_sat", t.ref_sat, path);
  read_field(j, "mask_width", t.mask_width, path);
  read_field(j, "mask_height", t.mask_height, path);
  read_field(j, "w1", t.w1, path);
  read_field(j, "w2", t.w2, path);
  return t;
}

EngineConfig engine_config_from_json(const json& j) {
  require_object(j, "config");
  EngineConfig c;
  reject_unknown(j, to_json(c), "");
  if (j.contains("red_template")) c.red_template = template_from_json(j["red_template"], c.red_template, "red_template");
  if (j.contains("green_template"))
    c.green_template = template_from_json(j["green_template"], c.green_template, "green_template");
  if (j.contains("detector")) {
    const json& d = j["detector"];
    require_object(d, "detector");
    read_field(d, "stride", c.detector.stride, "detector");
    read_field(d, "response_threshold", c.detector.response_threshold, "detector");
    read_field(d, "area_min", c.detector.area_min, "detector");
    read_field(d, "area_max", c.detector.area_max, "detector");
    read_field(d, "search_window_half", c.detector.search_window_half, "detector");
    read_field(d, "region_color_tol", c.detector.region_color_tol, "detector");
  }
  if (j.contains("kalman")) {
    const json& k = j["kalman"];
    require_object(k, "kalman");
    read_field(k, "process_noise", c.kalman.process_noise, "kalman");
    read_field(k, "measurement_noise", c.kalman.measurement_noise, "kalman");
    read_field(k, "max_misses", c.kalman.max_misses, "kalman");
    read_field(k, "initial_variance", c.kalman.initial_variance, "kalman");
  }
  if (j.contains("gestures")) {
    const json& g = j["gestures"];
    require_object(g, "gestures");
    read_field(g, "dwell_time", c.gestures.dwell_time, "gestures");
    read_field(g, "dwell_radius", c.gestures.dwell_radius, "gestures");
    read_field(g, "move_threshold", c.gestures.move_threshold, "gestures");
    read_field(g, "zoom_threshold", c.gestures.zoom_threshold, "gestures");
    read_field(g, "axis_dominance", c.gestures.axis_dominance, "gestures");
  }
  if (j.contains("screen")) {
    const json& s = j["screen"];
    require_object(s, "screen");
    read_field(s, "width", c.screen.width, "screen");
    read_field(s, "height", c.screen.height, "screen");
  }
  read_field(j, "frame_budget", c.frame_budget, "");
  read_field(j, "raw_positions", c.raw_positions, "");
  c.validate();
  return c;
}

EngineConfig load_engine_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path, e.what());
  }
  return engine_config_from_json(j);
}

json to_json(const FrameReport& r, bool include_timing) {
  auto det = [](const std::optional<Detection>& d) -> json {
    if (!d) return nullptr;
    return {{"center", point(d->center)},
            {"area", d->area},
            {"response", d->response.value},
            {"frame_index", d->frame_index}};
  };
  auto track = [](const TrackSummary& t) -> json {
    return {{"status", std::string(to_string(t.status))},
            {"smoothed", t.smoothed ? point(*t.smoothed) : json(nullptr)},
            {"scan", std::string(to_string(t.scan))},
            {"evals", t.evals}};
  };
  json events = json::array();
  for (const GestureEvent& e : r.events) {
    json ev{{"kind", std::string(to_string(e.kind))}, {"frame_index", e.frame_index}, {"timestamp", e.timestamp}};
    if (e.kind == GestureKind::CursorMove) {
      ev["x"] = e.screen.x;
      ev["y"] = e.screen.y;
    }
    events.push_back(std::move(ev));
  }
  json out{{"frame_index", r.frame_index},
           {"timestamp", r.timestamp},
           {"red", det(r.red)},
           {"green", det(r.green)},
           {"red_track", track(r.red_track)},
           {"green_track", track(r.green_track)},
           {"events", std::move(events)},
           {"eval_count", r.eval_count}};
  if (include_timing) out["elapsed"] = r.elapsed;
  return out;
}

std::string report_line(const FrameReport& r, bool include_timing) { return to_json(r, include_timing).dump(); }

}  // namespace mm
