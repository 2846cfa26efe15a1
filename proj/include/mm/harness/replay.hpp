#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "mm/gestures.hpp"
#include "mm/harness/synth.hpp"
#include "mm/pipeline.hpp"

namespace mm::harness {

struct ErrorStats {
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population
  double max = 0.0;
};

ErrorStats error_stats(const std::vector<double>& errors);

/// Mean squared second difference over consecutive samples; 0 when fewer than three.
double jerk_metric(const std::vector<PointD>& trajectory);

struct Reacquisition {
  std::uint64_t lost_frame = 0;        // frame on which the track became Lost
  std::uint64_t reacquired_frame = 0;  // first later frame with a detection
  std::uint64_t evals = 0;             // positions evaluated in between (inclusive of reacquired frame)
};

struct MarkerMetrics {
  ErrorStats centroid_error;  // detection centre vs rendered centre on clean frames
  double raw_jerk = 0.0;
  double filtered_jerk = 0.0;
  std::vector<Reacquisition> reacquisitions;
  std::size_t detections = 0;
};

/// Per-command tally in the style of a user-study table: how many of each
/// expected command fired.
struct CommandTally {
  GestureKind kind = GestureKind::LeftClick;
  int expected = 0;
  int hits = 0;
};

struct RunMetrics {
  std::vector<std::uint64_t> eval_counts;  // per frame
  MarkerMetrics red;
  MarkerMetrics green;
  std::vector<GestureEvent> discrete_events;
  std::vector<CommandTally> tallies;  // only when an expected script was given
  int unexpected_events = 0;
  double p50_elapsed = 0.0;
  double p95_elapsed = 0.0;
  double frame_budget = 0.0;
  std::vector<FrameReport> reports;

  int expected_total() const;
  int hits_total() const;
};

/// Runs the engine over `source`, joins reports with ground truth and
/// computes metrics. The first track of each colour in the truth is the one
/// scored.
RunMetrics replay(const EngineConfig& cfg, TruthSource& source,
                  const std::optional<std::vector<GestureKind>>& expected = std::nullopt);

nlohmann::ordered_json to_json(const RunMetrics& m);

/// Value at fraction q of the sorted samples (nearest rank).
double percentile(std::vector<double> samples, double q);

}  // namespace mm::harness
