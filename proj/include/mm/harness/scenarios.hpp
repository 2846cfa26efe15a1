#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mm/gestures.hpp"
#include "mm/harness/synth.hpp"

namespace mm::harness {

/// Built-in scene with the discrete events it is expected to produce.
struct Scenario {
  std::string name;
  SceneScript script;
  std::vector<GestureKind> expected;
};

/// Red disc sitting still at the frame centre.
Scenario static_disc_scenario(double seconds = 1.0);

/// Red disc circling the frame at sub-blur speed for `frames` frames.
Scenario moving_disc_scenario(std::size_t frames = 500);

/// Linear segment then a turn, with Gaussian centre jitter.
Scenario jitter_path_scenario(double sigma, std::size_t frames = 300);

/// Red disc whose speed jumps past the blur threshold and back.
Scenario velocity_ramp_scenario();

/// The eight gesture fixtures: cursor_path, left_click, right_click,
/// double_click, zoom_in, zoom_out, forward, backward.
std::vector<Scenario> gesture_scenarios();

/// A dwell-then-move fixture for one command (left/right/double click,
/// forward or backward) anchored at `anchor`, with centre jitter `sigma`.
Scenario dwell_scenario(GestureKind kind, PointD anchor, double sigma);

/// Looks up any built-in scenario by name.
std::optional<Scenario> find_scenario(const std::string& name);
std::vector<std::string> scenario_names();

}  // namespace mm::harness
