#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mm/color.hpp"
#include "mm/geometry.hpp"
#include "mm/matcher.hpp"
#include "mm/pipeline.hpp"

namespace mm::harness {

struct Waypoint {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
};

/// One marker disc following a piecewise-linear path.
struct MarkerTrack {
  MarkerColor color = MarkerColor::Red;
  std::vector<Waypoint> path;  // sorted by t; held constant outside its span
  double radius = 12.0;
  std::vector<std::pair<double, double>> hidden;  // [t0, t1) intervals with no disc drawn
};

/// Static same-coloured blob, typically sized outside the detector's area gate.
struct Distractor {
  MarkerColor color = MarkerColor::Red;
  double x = 0.0;
  double y = 0.0;
  double radius = 4.0;
};

struct SceneScript {
  int width = 640;
  int height = 480;
  double duration = 1.0;  // seconds
  double fps = 30.0;
  std::array<std::uint8_t, 3> background{128, 128, 128};
  int background_noise = 0;     // uniform per-channel perturbation in [-n, n]
  double jitter_sigma = 0.0;    // Gaussian jitter of rendered disc centres, px
  double blur_velocity_threshold = std::numeric_limits<double>::infinity();  // px/s
  std::vector<MarkerTrack> tracks;
  std::vector<Distractor> distractors;

  /// Throws ConfigError.
  void validate() const;
  std::size_t frame_count() const;
  /// Frame timestamp in integer microseconds (the wire resolution).
  std::uint64_t timestamp_us(std::size_t frame) const;
};

nlohmann::ordered_json to_json(const SceneScript& s);
SceneScript scene_from_json(const nlohmann::ordered_json& j);

struct MarkerTruth {
  MarkerColor color = MarkerColor::Red;
  PointD path_center;      // noise-free trajectory position
  PointD rendered_center;  // centre actually drawn (path plus jitter)
  double speed = 0.0;      // analytic path speed, px/s
  bool visible = false;    // disc drawn at all
  bool clean = false;      // drawn without motion blur
};

struct SynthFrame {
  RgbFrame frame;
  std::uint64_t t_us = 0;
  std::vector<MarkerTruth> truth;  // one per script track, same order

  double t() const noexcept { return static_cast<double>(t_us) * 1e-6; }
};

/// Stream of frames carrying ground truth.
class TruthSource {
 public:
  virtual ~TruthSource() = default;
  virtual std::optional<SynthFrame> next() = 0;
};

/// Path position and analytic velocity at time t.
std::pair<PointD, PointD> path_state(const MarkerTrack& track, double t);

/// Deterministic renderer for a script: the same (script, seed) always yields
/// bit-identical frames, and each frame's randomness depends only on
/// (seed, frame index).
class SyntheticSequence final : public TruthSource {
 public:
  /// Throws ConfigError for an invalid script.
  SyntheticSequence(SceneScript script, std::uint64_t seed);

  std::size_t size() const noexcept { return count_; }
  SynthFrame render(std::size_t index) const;
  std::optional<SynthFrame> next() override;

  const SceneScript& script() const noexcept { return script_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  SceneScript script_;
  std::uint64_t seed_;
  std::size_t count_;
  std::size_t pos_ = 0;
};

inline SyntheticSequence synth_sequence(SceneScript script, std::uint64_t seed) {
  return SyntheticSequence(std::move(script), seed);
}

/// Adapts a TruthSource to the engine's FrameSource, keeping the truth of the
/// most recently returned frame.
class TruthFrameSource final : public FrameSource {
 public:
  explicit TruthFrameSource(TruthSource& inner) : inner_(inner) {}
  std::optional<TimedFrame> next() override;
  const std::vector<MarkerTruth>& last_truth() const noexcept { return truth_; }

 private:
  TruthSource& inner_;
  std::vector<MarkerTruth> truth_;
};

/// Pure marker colours used by the renderer.
std::array<std::uint8_t, 3> marker_rgb(MarkerColor c) noexcept;

// Primitive painters, also used directly by tests.
void paint_disc(RgbFrame& f, PointD c, double radius, std::array<std::uint8_t, 3> rgb);
void paint_capsule(RgbFrame& f, PointD a, PointD b, double radius, std::array<std::uint8_t, 3> rgb);

}  // namespace mm::harness
