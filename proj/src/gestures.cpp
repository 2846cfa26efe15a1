#include "mm/gestures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mm/errors.hpp"

namespace mm {

void GestureConfig::validate(std::string_view path) const {
  const std::string p(path);
  if (!(dwell_time > 0.0)) throw ConfigError(p + ".dwell_time", "must be > 0");
  if (!(dwell_radius > 0.0)) throw ConfigError(p + ".dwell_radius", "must be > 0");
  if (!(move_threshold > dwell_radius)) throw ConfigError(p + ".move_threshold", "must exceed dwell_radius");
  if (!(zoom_threshold > 0.0)) throw ConfigError(p + ".zoom_threshold", "must be > 0");
  if (!(axis_dominance >= 1.0)) throw ConfigError(p + ".axis_dominance", "must be >= 1");
}

GestureConfig GestureConfig::scaled_for_width(int frame_width) const {
  const double k = frame_width / 640.0;
  GestureConfig c = *this;
  c.dwell_radius *= k;
  c.move_threshold *= k;
  c.zoom_threshold *= k;
  return c;
}

std::string_view to_string(GestureKind k) noexcept {
  switch (k) {
    case GestureKind::CursorMove: return "cursor";
    case GestureKind::LeftClick: return "left_click";
    case GestureKind::RightClick: return "right_click";
    case GestureKind::DoubleClick: return "double_click";
    case GestureKind::ZoomIn: return "zoom_in";
    case GestureKind::ZoomOut: return "zoom_out";
    case GestureKind::Forward: return "forward";
    case GestureKind::Backward: return "backward";
  }
  return "cursor";
}

std::optional<GestureKind> gesture_from_string(std::string_view name) noexcept {
  for (auto k : {GestureKind::CursorMove, GestureKind::LeftClick, GestureKind::RightClick, GestureKind::DoubleClick,
                 GestureKind::ZoomIn, GestureKind::ZoomOut, GestureKind::Forward, GestureKind::Backward})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

std::string_view to_string(Phase p) noexcept {
  switch (p) {
    case Phase::Start: return "start";
    case Phase::CursorMove: return "cursor_move";
    case Phase::RedDwelling: return "red_dwelling";
    case Phase::RedArmed: return "red_armed";
    case Phase::GreenDwelling: return "green_dwelling";
    case Phase::GreenArmed: return "green_armed";
    case Phase::ZoomTracking: return "zoom_tracking";
  }
  return "start";
}

PointI map_to_screen(PointD p, Size frame, Size screen) {
  if (frame.width <= 0 || frame.height <= 0 || screen.width <= 0 || screen.height <= 0)
    throw ParameterError("map_to_screen: dimensions must be positive");
  const double sx = std::floor(p.x * screen.width / frame.width);
  const double sy = std::floor(p.y * screen.height / frame.height);
  return {static_cast<int>(std::clamp(sx, 0.0, screen.width - 1.0)),
          static_cast<int>(std::clamp(sy, 0.0, screen.height - 1.0))};
}

namespace {

enum class Dir { None, Up, Down, Left, Right };

// Direction of a post-dwell displacement. `reached` reports whether the move
// threshold was crossed; None with reached == true means no axis dominates.
Dir classify(PointD disp, const GestureConfig& cfg, bool& reached) {
  const double ax = std::abs(disp.x);
  const double ay = std::abs(disp.y);
  reached = std::max(ax, ay) >= cfg.move_threshold;
  if (!reached) return Dir::None;
  if (ax >= cfg.axis_dominance * ay) return disp.x > 0 ? Dir::Right : Dir::Left;
  if (ay >= cfg.axis_dominance * ax) return disp.y > 0 ? Dir::Down : Dir::Up;
  return Dir::None;
}

bool within(PointD p, PointD anchor, double radius) { return distance(p, anchor) <= radius; }

}  // namespace

MachineStepResult machine_step(const MachineState& ms, std::optional<PointD> red, std::optional<PointD> green,
                               double t, const GestureConfig& cfg, Size frame, Size screen,
                               std::uint64_t frame_index) {
  if (ms.last_t && t < *ms.last_t)
    throw ParameterError("machine_step: timestamp " + std::to_string(t) + " precedes " + std::to_string(*ms.last_t));

  MachineStepResult out{ms, {}};
  MachineState& s = out.state;
  std::optional<GestureKind> command;

  if (red) out.events.push_back({GestureKind::CursorMove, map_to_screen(*red, frame, screen), frame_index, t});

  auto to_start = [&] { s.phase = Phase::Start; };

  if (red && green) {
    const double dist = distance(*red, *green);
    if (s.phase != Phase::ZoomTracking) {
      s.phase = Phase::ZoomTracking;
      s.zoom_anchor = dist;
    } else if (dist - s.zoom_anchor >= cfg.zoom_threshold) {
      command = GestureKind::ZoomIn;
      to_start();
    } else if (s.zoom_anchor - dist >= cfg.zoom_threshold) {
      command = GestureKind::ZoomOut;
      to_start();
    }
  } else if (red) {
    const PointD p = *red;
    switch (s.phase) {
      case Phase::Start:
      case Phase::ZoomTracking:
      case Phase::GreenDwelling:
      case Phase::GreenArmed:
        s.phase = Phase::CursorMove;
        break;
      case Phase::CursorMove:
        // Dwell begins at the previous frame if the marker has stayed put.
        if (ms.last_red && !ms.last_green && ms.last_t && within(p, *ms.last_red, cfg.dwell_radius)) {
          s.phase = Phase::RedDwelling;
          s.anchor = *ms.last_red;
          s.since = *ms.last_t;
        }
        break;
      case Phase::RedDwelling:
      case Phase::RedArmed:
        break;
    }
    if (s.phase == Phase::RedDwelling) {
      if (!within(p, s.anchor, cfg.dwell_radius))
        s.phase = Phase::CursorMove;  // dwell restarts from here
      else if (t - s.since >= cfg.dwell_time)
        s.phase = Phase::RedArmed;
    } else if (s.phase == Phase::RedArmed) {
      bool reached = false;
      const Dir d = classify({p.x - s.anchor.x, p.y - s.anchor.y}, cfg, reached);
      if (reached) {
        if (d == Dir::Up) command = GestureKind::LeftClick;
        else if (d == Dir::Right) command = GestureKind::RightClick;
        else if (d == Dir::Down) command = GestureKind::DoubleClick;
        to_start();
      }
    }
  } else if (green) {
    const PointD p = *green;
    switch (s.phase) {
      case Phase::Start:
        if (ms.last_green && !ms.last_red && ms.last_t && within(p, *ms.last_green, cfg.dwell_radius)) {
          s.phase = Phase::GreenDwelling;
          s.anchor = *ms.last_green;
          s.since = *ms.last_t;
        }
        break;
      case Phase::GreenDwelling:
      case Phase::GreenArmed:
        break;
      default:
        to_start();
        break;
    }
    if (s.phase == Phase::GreenDwelling) {
      if (!within(p, s.anchor, cfg.dwell_radius))
        to_start();
      else if (t - s.since >= cfg.dwell_time)
        s.phase = Phase::GreenArmed;
    } else if (s.phase == Phase::GreenArmed) {
      bool reached = false;
      const Dir d = classify({p.x - s.anchor.x, p.y - s.anchor.y}, cfg, reached);
      if (reached) {
        if (d == Dir::Right) command = GestureKind::Forward;
        else if (d == Dir::Left) command = GestureKind::Backward;
        to_start();
      }
    }
  } else {
    to_start();
  }

  if (command) out.events.push_back({*command, {}, frame_index, t});
  s.last_red = red;
  s.last_green = green;
  s.last_t = t;
  return out;
}

}  // namespace mm
