#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mm/color.hpp"
#include "mm/detector.hpp"
#include "mm/gestures.hpp"
#include "mm/matcher.hpp"
#include "mm/tracker.hpp"

namespace mm {

struct EngineConfig {
  MarkerTemplate red_template = MarkerTemplate::red();
  MarkerTemplate green_template = MarkerTemplate::green();
  DetectorConfig detector;
  KalmanConfig kalman;
  GestureConfig gestures;
  Size screen{1920, 1080};
  double frame_budget = 0.025;  // seconds per frame
  // Feed raw detections instead of filtered positions to the cursor and
  // gesture machine. Circular scanning always follows the filtered track.
  bool raw_positions = false;

  /// Throws ConfigError with the dotted field path.
  void validate() const;

  friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

enum class ScanMode { Raster, Circular };

std::string_view to_string(ScanMode m) noexcept;

struct TrackSummary {
  TrackStatus status = TrackStatus::Lost;
  std::optional<PointD> smoothed;
  ScanMode scan = ScanMode::Raster;  // strategy used on this frame
  std::uint64_t evals = 0;           // positions evaluated for this marker
};

struct FrameReport {
  std::uint64_t frame_index = 0;
  double timestamp = 0.0;
  std::optional<Detection> red;
  std::optional<Detection> green;
  TrackSummary red_track;
  TrackSummary green_track;
  std::vector<GestureEvent> events;
  std::uint64_t eval_count = 0;
  double elapsed = 0.0;  // seconds spent in process_frame
};

/// Per-frame orchestration: HS conversion, red then green detection, Kalman
/// tracking and gesture recognition. Single-writer; frames must arrive in
/// timestamp order.
class Engine {
 public:
  /// Validates `cfg`; both tracks start Lost so the first frame is raster scanned.
  explicit Engine(EngineConfig cfg);

  /// Throws ParameterError when `t` precedes the previous frame's timestamp.
  FrameReport process_frame(const RgbFrame& frame, double t);

  const EngineConfig& config() const noexcept { return cfg_; }

  /// Replace one marker's template, e.g. after calibration.
  void set_template(const MarkerTemplate& tpl);

  const TrackState& track(MarkerColor c) const noexcept { return c == MarkerColor::Red ? red_ : green_; }
  const MachineState& machine() const noexcept { return machine_.state(); }
  std::uint64_t frames_processed() const noexcept { return next_index_; }
  std::uint64_t conversions() const noexcept { return conversions_; }

 private:
  struct MarkerResult {
    std::optional<Detection> det;
    TrackSummary summary;
  };
  MarkerResult run_marker(const HsFrame& hs, const MarkerTemplate& tpl, TrackState& track, double dt);

  EngineConfig cfg_;
  TrackState red_;
  TrackState green_;
  GestureMachine machine_;
  std::optional<double> last_t_;
  std::uint64_t next_index_ = 0;
  std::uint64_t conversions_ = 0;
};

inline Engine engine_new(EngineConfig cfg) { return Engine(std::move(cfg)); }

struct TimedFrame {
  RgbFrame frame;
  double t = 0.0;
};

/// Pull-based frame stream. `next()` returns nullopt at end of stream.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual std::optional<TimedFrame> next() = 0;
};

class VectorSource final : public FrameSource {
 public:
  explicit VectorSource(std::vector<TimedFrame> frames) : frames_(std::move(frames)) {}
  std::optional<TimedFrame> next() override {
    if (pos_ >= frames_.size()) return std::nullopt;
    return frames_[pos_++];
  }

 private:
  std::vector<TimedFrame> frames_;
  std::size_t pos_ = 0;
};

/// Fold of process_frame over a source. Source failures are rethrown as
/// FormatError carrying the index of the frame being read.
std::vector<FrameReport> run_stream(Engine& engine, FrameSource& source);

}  // namespace mm
