#include "mm/tracker.hpp"

#include <cmath>
#include <string>

#include "mm/errors.hpp"

namespace mm {

void KalmanConfig::validate(std::string_view path) const {
  const std::string p(path);
  if (!(process_noise > 0.0)) throw ConfigError(p + ".process_noise", "must be > 0");
  if (!(measurement_noise > 0.0)) throw ConfigError(p + ".measurement_noise", "must be > 0");
  if (max_misses < 0) throw ConfigError(p + ".max_misses", "must be >= 0");
  for (double v : initial_variance)
    if (!(v > 0.0)) throw ConfigError(p + ".initial_variance", "entries must be > 0");
}

std::string_view to_string(TrackStatus s) noexcept {
  switch (s) {
    case TrackStatus::Active: return "active";
    case TrackStatus::Coasting: return "coasting";
    case TrackStatus::Lost: return "lost";
  }
  return "lost";
}

TrackState TrackState::lost(const KalmanConfig& cfg) {
  TrackState t;
  t.misses = cfg.max_misses + 1;
  t.status = TrackStatus::Lost;
  return t;
}

TrackState predict(const TrackState& track, double dt, const KalmanConfig& cfg) {
  if (!(dt > 0.0)) throw ParameterError("predict: dt must be > 0, got " + std::to_string(dt));
  if (track.status == TrackStatus::Lost) throw ParameterError("predict: track is lost");

  Eigen::Matrix4d f = Eigen::Matrix4d::Identity();
  f(0, 2) = dt;
  f(1, 3) = dt;

  const double q = cfg.process_noise;
  const double dt2 = dt * dt;
  const double dt3 = dt2 * dt;
  Eigen::Matrix4d qm = Eigen::Matrix4d::Zero();
  for (int axis = 0; axis < 2; ++axis) {
    qm(axis, axis) = q * dt3 / 3.0;
    qm(axis, axis + 2) = q * dt2 / 2.0;
    qm(axis + 2, axis) = q * dt2 / 2.0;
    qm(axis + 2, axis + 2) = q * dt;
  }

  TrackState out = track;
  out.state = f * track.state;
  out.covariance = f * track.covariance * f.transpose() + qm;
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose());
  return out;
}

TrackState update(const TrackState& track, PointD z, const KalmanConfig& cfg) {
  if (!std::isfinite(z.x) || !std::isfinite(z.y)) throw ParameterError("update: non-finite measurement");
  if (track.status == TrackStatus::Lost) throw ParameterError("update: track is lost");

  Eigen::Matrix<double, 2, 4> h = Eigen::Matrix<double, 2, 4>::Zero();
  h(0, 0) = 1.0;
  h(1, 1) = 1.0;
  const Eigen::Matrix2d r = Eigen::Matrix2d::Identity() * cfg.measurement_noise;

  const Eigen::Vector2d innovation = Eigen::Vector2d(z.x, z.y) - h * track.state;
  const Eigen::Matrix2d s = h * track.covariance * h.transpose() + r;
  const Eigen::Matrix<double, 4, 2> k = track.covariance * h.transpose() * s.inverse();

  // Joseph form keeps the covariance symmetric positive semidefinite.
  const Eigen::Matrix4d ikh = Eigen::Matrix4d::Identity() - k * h;
  TrackState out = track;
  out.state = track.state + k * innovation;
  out.covariance = ikh * track.covariance * ikh.transpose() + k * r * k.transpose();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose());
  out.misses = 0;
  out.status = TrackStatus::Active;
  return out;
}

TrackState reset(const Detection& det, const KalmanConfig& cfg) {
  TrackState t;
  t.state << det.center.x, det.center.y, 0.0, 0.0;
  t.covariance = Eigen::Vector4d(cfg.initial_variance.data()).asDiagonal();
  t.misses = 0;
  t.status = TrackStatus::Active;
  return t;
}

StepResult step(const TrackState& track, const std::optional<Detection>& det, double dt, const KalmanConfig& cfg) {
  if (!(dt > 0.0)) throw ParameterError("step: dt must be > 0");
  if (track.status == TrackStatus::Lost) {
    if (det) {
      TrackState t = reset(*det, cfg);
      return {t, t.position()};
    }
    TrackState t = track;
    if (t.misses <= cfg.max_misses) t.misses = cfg.max_misses + 1;
    return {t, std::nullopt};
  }

  TrackState t = predict(track, dt, cfg);
  if (det) {
    t = update(t, to_double(det->center), cfg);
    return {t, t.position()};
  }
  ++t.misses;
  if (t.misses > cfg.max_misses) {
    t.status = TrackStatus::Lost;
    return {t, std::nullopt};
  }
  t.status = TrackStatus::Coasting;
  return {t, t.position()};
}

}  // namespace mm
