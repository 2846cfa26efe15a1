#pragma once

#include <array>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "mm/detector.hpp"
#include "mm/geometry.hpp"

namespace mm {

/// Constant-velocity Kalman filter over (x, y, vx, vy) with position-only
/// measurements. Units are pixels and seconds.
struct KalmanConfig {
  double process_noise = 50.0;      // q, white-acceleration spectral density (px^2/s^3)
  double measurement_noise = 25.0;  // r, px^2
  int max_misses = 3;               // coasting frames before Lost
  std::array<double, 4> initial_variance{100.0, 100.0, 400.0, 400.0};

  void validate(std::string_view path = "kalman") const;

  friend bool operator==(const KalmanConfig&, const KalmanConfig&) = default;
};

enum class TrackStatus { Active, Coasting, Lost };

std::string_view to_string(TrackStatus s) noexcept;

struct TrackState {
  Eigen::Vector4d state = Eigen::Vector4d::Zero();
  Eigen::Matrix4d covariance = Eigen::Matrix4d::Zero();
  int misses = 0;
  TrackStatus status = TrackStatus::Lost;

  PointD position() const noexcept { return {state[0], state[1]}; }
  PointD velocity() const noexcept { return {state[2], state[3]}; }

  /// A track with no estimate, as at start-up. Its misses exceed the
  /// coasting budget so that status == Lost holds.
  static TrackState lost(const KalmanConfig& cfg);

  bool operator==(const TrackState& o) const {
    return state == o.state && covariance == o.covariance && misses == o.misses && status == o.status;
  }
};

/// Time update. Throws ParameterError if dt <= 0 or the track is Lost.
TrackState predict(const TrackState& track, double dt, const KalmanConfig& cfg);

/// Measurement update with a position observation. Throws ParameterError on
/// non-finite input or a Lost track.
TrackState update(const TrackState& track, PointD measurement, const KalmanConfig& cfg);

/// Start a fresh Active track at the detection with zero velocity.
TrackState reset(const Detection& det, const KalmanConfig& cfg);

struct StepResult {
  TrackState track;
  std::optional<PointD> smoothed;
};

/// One frame: predict, then update if `det` is present, otherwise coast.
/// A Lost track is re-initialised by a detection and otherwise stays Lost.
StepResult step(const TrackState& track, const std::optional<Detection>& det, double dt, const KalmanConfig& cfg);

}  // namespace mm
