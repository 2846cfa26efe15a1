#include "mm/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "mm/errors.hpp"

namespace mm {

std::string_view to_string(ScanMode m) noexcept { return m == ScanMode::Raster ? "raster" : "circular"; }

void EngineConfig::validate() const {
  red_template.validate("red_template");
  green_template.validate("green_template");
  if (red_template.color != MarkerColor::Red) throw ConfigError("red_template.color", "must be red");
  if (green_template.color != MarkerColor::Green) throw ConfigError("green_template.color", "must be green");
  detector.validate("detector");
  kalman.validate("kalman");
  gestures.validate("gestures");
  if (screen.width <= 0) throw ConfigError("screen.width", "must be > 0");
  if (screen.height <= 0) throw ConfigError("screen.height", "must be > 0");
  if (!(frame_budget > 0.0)) throw ConfigError("frame_budget", "must be > 0");
}

namespace {

EngineConfig validated(EngineConfig cfg) {
  cfg.validate();
  return cfg;
}

// Smallest dt handed to the filter when two frames share a timestamp.
constexpr double kMinDt = 1e-6;

}  // namespace

Engine::Engine(EngineConfig cfg)
    : cfg_(validated(std::move(cfg))),
      red_(TrackState::lost(cfg_.kalman)),
      green_(TrackState::lost(cfg_.kalman)),
      machine_(cfg_.gestures, cfg_.screen) {}

void Engine::set_template(const MarkerTemplate& tpl) {
  if (tpl.color == MarkerColor::Red) {
    tpl.validate("red_template");
    cfg_.red_template = tpl;
  } else {
    tpl.validate("green_template");
    cfg_.green_template = tpl;
  }
}

Engine::MarkerResult Engine::run_marker(const HsFrame& hs, const MarkerTemplate& tpl, TrackState& track, double dt) {
  MarkerResult res;
  std::optional<PointI> prev;
  if (track.status != TrackStatus::Lost) {
    const PointD p = track.position();
    prev = PointI{std::clamp(static_cast<int>(std::lround(p.x)), 0, hs.width() - 1),
                  std::clamp(static_cast<int>(std::lround(p.y)), 0, hs.height() - 1)};
  }
  OpCounter counter;
  res.det = detect(hs, tpl, cfg_.detector, prev, counter, next_index_);
  const StepResult sr = step(track, res.det, dt, cfg_.kalman);
  track = sr.track;
  res.summary.status = track.status;
  res.summary.smoothed = sr.smoothed;
  res.summary.scan = prev ? ScanMode::Circular : ScanMode::Raster;
  res.summary.evals = counter.positions;
  return res;
}

FrameReport Engine::process_frame(const RgbFrame& frame, double t) {
  const auto start = std::chrono::steady_clock::now();
  if (!std::isfinite(t)) throw ParameterError("process_frame: non-finite timestamp");
  if (last_t_ && t < *last_t_)
    throw ParameterError("process_frame: timestamp " + std::to_string(t) + " precedes " + std::to_string(*last_t_));
  const double dt = last_t_ ? std::max(t - *last_t_, kMinDt) : kMinDt;

  const HsFrame hs = rgb_to_hs(frame);
  ++conversions_;

  FrameReport rep;
  rep.frame_index = next_index_;
  rep.timestamp = t;

  MarkerResult red = run_marker(hs, cfg_.red_template, red_, dt);
  MarkerResult green = run_marker(hs, cfg_.green_template, green_, dt);
  rep.red = red.det;
  rep.green = green.det;
  rep.red_track = red.summary;
  rep.green_track = green.summary;
  rep.eval_count = red.summary.evals + green.summary.evals;

  auto position = [&](const MarkerResult& m) -> std::optional<PointD> {
    if (!cfg_.raw_positions) return m.summary.smoothed;
    if (m.det) return to_double(m.det->center);
    return std::nullopt;
  };
  rep.events = machine_.step(position(red), position(green), t, frame.size(), rep.frame_index);

  last_t_ = t;
  ++next_index_;
  rep.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::vector<FrameReport> run_stream(Engine& engine, FrameSource& source) {
  std::vector<FrameReport> reports;
  for (;;) {
    std::optional<TimedFrame> f;
    try {
      f = source.next();
    } catch (const std::exception& e) {
      throw FormatError("frame " + std::to_string(reports.size()) + ": " + e.what());
    }
    if (!f) break;
    reports.push_back(engine.process_frame(f->frame, f->t));
  }
  return reports;
}

}  // namespace mm
