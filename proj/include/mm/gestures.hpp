#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <string_view>
#include <vector>

#include "mm/geometry.hpp"

namespace mm {

struct GestureConfig {
  double dwell_time = 2.0;      // seconds a marker must stay within dwell_radius
  double dwell_radius = 15.0;   // px
  double move_threshold = 40.0; // px of displacement from the dwell anchor
  double zoom_threshold = 30.0; // px of inter-marker distance change
  double axis_dominance = 1.5;  // |dominant| >= axis_dominance * |other|

  void validate(std::string_view path = "gestures") const;

  /// Pixel thresholds above are tuned for 640 px wide frames.
  GestureConfig scaled_for_width(int frame_width) const;

  friend bool operator==(const GestureConfig&, const GestureConfig&) = default;
};

enum class GestureKind { CursorMove, LeftClick, RightClick, DoubleClick, ZoomIn, ZoomOut, Forward, Backward };

/// Wire/log name: "cursor", "left_click", ..., "backward".
std::string_view to_string(GestureKind k) noexcept;
std::optional<GestureKind> gesture_from_string(std::string_view name) noexcept;
inline bool is_discrete(GestureKind k) noexcept { return k != GestureKind::CursorMove; }

struct GestureEvent {
  GestureKind kind = GestureKind::CursorMove;
  PointI screen;  // meaningful for CursorMove only
  std::uint64_t frame_index = 0;
  double timestamp = 0.0;
  friend bool operator==(const GestureEvent&, const GestureEvent&) = default;
};

enum class Phase { Start, CursorMove, RedDwelling, RedArmed, GreenDwelling, GreenArmed, ZoomTracking };

std::string_view to_string(Phase p) noexcept;

struct MachineState {
  Phase phase = Phase::Start;
  PointD anchor;              // dwell/armed phases
  double since = 0.0;         // dwell start time
  double zoom_anchor = 0.0;   // inter-marker distance at ZoomTracking entry
  std::optional<PointD> last_red;
  std::optional<PointD> last_green;
  std::optional<double> last_t;
  friend bool operator==(const MachineState&, const MachineState&) = default;
};

struct MachineStepResult {
  MachineState state;
  std::vector<GestureEvent> events;
};

/// Linear per-axis scaling from frame pixels to screen pixels, floored and
/// clamped to the screen. Throws ParameterError on zero dimensions.
PointI map_to_screen(PointD p, Size frame, Size screen);

/// One transition of the gesture recogniser for the marker positions seen at
/// time `t`. Emits at most one CursorMove (while red is visible) followed by at
/// most one discrete command. Throws ParameterError if `t` goes backwards.
MachineStepResult machine_step(const MachineState& ms, std::optional<PointD> red, std::optional<PointD> green,
                               double t, const GestureConfig& cfg, Size frame, Size screen,
                               std::uint64_t frame_index = 0);

/// Stateful convenience wrapper around machine_step.
class GestureMachine {
 public:
  GestureMachine(GestureConfig cfg, Size screen) : cfg_(cfg), screen_(screen) {}

  std::vector<GestureEvent> step(std::optional<PointD> red, std::optional<PointD> green, double t, Size frame,
                                 std::uint64_t frame_index = 0) {
    auto r = machine_step(state_, red, green, t, cfg_, frame, screen_, frame_index);
    state_ = r.state;
    return std::move(r.events);
  }

  const MachineState& state() const noexcept { return state_; }

 private:
  GestureConfig cfg_;
  Size screen_;
  MachineState state_;
};

}  // namespace mm
