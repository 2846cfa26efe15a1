#include "mm/harness/scenarios.hpp"

#include "mm/errors.hpp"

namespace mm::harness {

namespace {

MarkerTrack track(MarkerColor c, std::vector<Waypoint> path) {
  MarkerTrack t;
  t.color = c;
  t.path = std::move(path);
  return t;
}

// Dwell for 2.5 s at the anchor, move by `delta` over 0.3 s, hold 1 s.
std::vector<Waypoint> dwell_path(PointD a, PointD delta) {
  return {{0.0, a.x, a.y}, {2.5, a.x, a.y}, {2.8, a.x + delta.x, a.y + delta.y}, {3.8, a.x + delta.x, a.y + delta.y}};
}

Scenario zoom(const std::string& name, double from_half, double to_half, GestureKind kind) {
  Scenario s{name, {}, {kind}};
  s.script.duration = 2.0;
  const double cx = 320;
  const double cy = 240;
  s.script.tracks.push_back(track(MarkerColor::Red, {{0.0, cx - from_half, cy}, {0.6, cx - from_half, cy},
                                                     {1.2, cx - to_half, cy}, {2.0, cx - to_half, cy}}));
  s.script.tracks.push_back(track(MarkerColor::Green, {{0.0, cx + from_half, cy}, {0.6, cx + from_half, cy},
                                                       {1.2, cx + to_half, cy}, {2.0, cx + to_half, cy}}));
  return s;
}

}  // namespace

Scenario static_disc_scenario(double seconds) {
  Scenario s{"static_disc", {}, {}};
  s.script.duration = seconds;
  s.script.tracks.push_back(track(MarkerColor::Red, {{0.0, 320, 240}}));
  return s;
}

Scenario moving_disc_scenario(std::size_t frames) {
  Scenario s{"moving_disc", {}, {}};
  s.script.duration = static_cast<double>(frames) / s.script.fps;
  const double d = s.script.duration;
  // Rectangle loop, roughly 70 px/s.
  s.script.tracks.push_back(track(MarkerColor::Red, {{0.0, 120.3, 100.6},
                                                     {d * 0.3, 480.7, 100.6},
                                                     {d * 0.5, 480.7, 360.2},
                                                     {d * 0.8, 120.3, 360.2},
                                                     {d, 120.3, 100.6}}));
  return s;
}

Scenario jitter_path_scenario(double sigma, std::size_t frames) {
  Scenario s{"jitter_path", {}, {}};
  s.script.duration = static_cast<double>(frames) / s.script.fps;
  s.script.jitter_sigma = sigma;
  const double d = s.script.duration;
  s.script.tracks.push_back(track(MarkerColor::Red, {{0.0, 100, 100}, {d * 0.5, 500, 160}, {d, 380, 400}}));
  return s;
}

Scenario velocity_ramp_scenario() {
  Scenario s{"velocity_ramp", {}, {}};
  s.script.duration = 2.1;
  s.script.blur_velocity_threshold = 900.0;
  // 100 px/s, then 1000 px/s for 0.3 s, then 100 px/s again.
  s.script.tracks.push_back(track(MarkerColor::Red, {{0.0, 100, 240}, {1.0, 200, 240}, {1.3, 500, 240}, {2.1, 580, 240}}));
  return s;
}

Scenario dwell_scenario(GestureKind kind, PointD anchor, double sigma) {
  const double step = 80.0;
  Scenario s{std::string(to_string(kind)), {}, {kind}};
  s.script.duration = 3.8;
  s.script.jitter_sigma = sigma;
  MarkerColor color = MarkerColor::Red;
  PointD delta{};
  switch (kind) {
    case GestureKind::LeftClick: delta = {0, -step}; break;
    case GestureKind::RightClick: delta = {step, 0}; break;
    case GestureKind::DoubleClick: delta = {0, step}; break;
    case GestureKind::Forward: color = MarkerColor::Green; delta = {step, 0}; break;
    case GestureKind::Backward: color = MarkerColor::Green; delta = {-step, 0}; break;
    default: throw ParameterError("dwell_scenario: not a dwell gesture");
  }
  s.script.tracks.push_back(track(color, dwell_path(anchor, delta)));
  return s;
}

std::vector<Scenario> gesture_scenarios() {
  std::vector<Scenario> out;
  Scenario cursor{"cursor_path", {}, {}};
  cursor.script.duration = 6.0;
  cursor.script.tracks.push_back(
      track(MarkerColor::Red, {{0.0, 100, 100}, {2.4, 500, 100}, {4.0, 500, 380}, {6.0, 150, 380}}));
  out.push_back(cursor);
  out.push_back(dwell_scenario(GestureKind::LeftClick, {300, 200}, 0.0));
  out.push_back(dwell_scenario(GestureKind::RightClick, {300, 200}, 0.0));
  out.push_back(dwell_scenario(GestureKind::DoubleClick, {300, 200}, 0.0));
  out.push_back(zoom("zoom_in", 40, 60, GestureKind::ZoomIn));
  out.push_back(zoom("zoom_out", 60, 40, GestureKind::ZoomOut));
  out.push_back(dwell_scenario(GestureKind::Forward, {300, 240}, 0.0));
  out.push_back(dwell_scenario(GestureKind::Backward, {300, 240}, 0.0));
  return out;
}

std::optional<Scenario> find_scenario(const std::string& name) {
  if (name == "static_disc") return static_disc_scenario();
  if (name == "moving_disc") return moving_disc_scenario();
  if (name == "jitter_path") return jitter_path_scenario(8.27);
  if (name == "velocity_ramp") return velocity_ramp_scenario();
  for (Scenario& s : gesture_scenarios())
    if (s.name == name) return s;
  return std::nullopt;
}

std::vector<std::string> scenario_names() {
  std::vector<std::string> names{"static_disc", "moving_disc", "jitter_path", "velocity_ramp"};
  for (const Scenario& s : gesture_scenarios()) names.push_back(s.name);
  return names;
}

}  // namespace mm::harness
