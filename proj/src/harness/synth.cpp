#include "mm/harness/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "mm/errors.hpp"

namespace mm::harness {

using json = nlohmann::ordered_json;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

bool is_hidden(const MarkerTrack& tr, double t) {
  return std::any_of(tr.hidden.begin(), tr.hidden.end(), [t](const auto& iv) { return t >= iv.first && t < iv.second; });
}

std::array<std::uint8_t, 3> blurred_rgb(std::array<std::uint8_t, 3> c) {
  // Half-way to mid gray: hue kept, saturation well below any matching tolerance.
  std::array<std::uint8_t, 3> out{};
  for (int i = 0; i < 3; ++i) out[i] = static_cast<std::uint8_t>((c[i] + 128 + 1) / 2);
  return out;
}

MarkerColor color_from(const json& j, const std::string& path) {
  const std::string s = j.get<std::string>();
  if (s == "red") return MarkerColor::Red;
  if (s == "green") return MarkerColor::Green;
  throw ConfigError(path, "expected \"red\" or \"green\"");
}

}  // namespace

std::array<std::uint8_t, 3> marker_rgb(MarkerColor c) noexcept {
  return c == MarkerColor::Red ? std::array<std::uint8_t, 3>{255, 0, 0} : std::array<std::uint8_t, 3>{0, 255, 0};
}

void SceneScript::validate() const {
  if (width < 1 || width > 0xFFFF) throw ConfigError("script.width", "must be in [1, 65535]");
  if (height < 1 || height > 0xFFFF) throw ConfigError("script.height", "must be in [1, 65535]");
  if (!(fps > 0.0)) throw ConfigError("script.fps", "must be > 0");
  if (!(duration >= 0.0) || !std::isfinite(duration)) throw ConfigError("script.duration", "must be >= 0");
  if (background_noise < 0 || background_noise > 255) throw ConfigError("script.background_noise", "must be in [0, 255]");
  if (!(jitter_sigma >= 0.0)) throw ConfigError("script.jitter_sigma", "must be >= 0");
  if (!(blur_velocity_threshold > 0.0)) throw ConfigError("script.blur_velocity_threshold", "must be > 0");
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    const std::string p = "script.tracks[" + std::to_string(i) + "]";
    const MarkerTrack& tr = tracks[i];
    if (!(tr.radius > 0.0)) throw ConfigError(p + ".radius", "must be > 0");
    if (tr.path.empty()) throw ConfigError(p + ".path", "needs at least one waypoint");
    for (std::size_t k = 0; k < tr.path.size(); ++k) {
      const double t = tr.path[k].t;
      if (t < 0.0 || t > duration) throw ConfigError(p + ".path", "waypoint time outside [0, duration]");
      if (k > 0 && t < tr.path[k - 1].t) throw ConfigError(p + ".path", "waypoint times must be nondecreasing");
    }
  }
  for (std::size_t i = 0; i < distractors.size(); ++i)
    if (!(distractors[i].radius > 0.0))
      throw ConfigError("script.distractors[" + std::to_string(i) + "].radius", "must be > 0");
}

std::size_t SceneScript::frame_count() const {
  return static_cast<std::size_t>(std::floor(duration * fps + 1e-9));
}

std::uint64_t SceneScript::timestamp_us(std::size_t frame) const {
  return static_cast<std::uint64_t>(std::llround(static_cast<double>(frame) * 1e6 / fps));
}

json to_json(const SceneScript& s) {
  json tracks = json::array();
  for (const MarkerTrack& tr : s.tracks) {
    json path = json::array();
    for (const Waypoint& w : tr.path) path.push_back({w.t, w.x, w.y});
    json hidden = json::array();
    for (const auto& [a, b] : tr.hidden) hidden.push_back({a, b});
    tracks.push_back({{"color", std::string(to_string(tr.color))},
                      {"radius", tr.radius},
                      {"path", std::move(path)},
                      {"hidden", std::move(hidden)}});
  }
  json distractors = json::array();
  for (const Distractor& d : s.distractors)
    distractors.push_back({{"color", std::string(to_string(d.color))}, {"x", d.x}, {"y", d.y}, {"radius", d.radius}});
  return {{"width", s.width},
          {"height", s.height},
          {"duration", s.duration},
          {"fps", s.fps},
          {"background", s.background},
          {"background_noise", s.background_noise},
          {"jitter_sigma", s.jitter_sigma},
          {"blur_velocity_threshold",
           std::isfinite(s.blur_velocity_threshold) ? json(s.blur_velocity_threshold) : json(nullptr)},
          {"tracks", std::move(tracks)},
          {"distractors", std::move(distractors)}};
}

SceneScript scene_from_json(const json& j) {
  SceneScript s;
  try {
    if (!j.is_object()) throw ConfigError("script", "expected an object");
    s.width = j.value("width", s.width);
    s.height = j.value("height", s.height);
    s.duration = j.value("duration", s.duration);
    s.fps = j.value("fps", s.fps);
    if (j.contains("background")) s.background = j["background"].get<std::array<std::uint8_t, 3>>();
    s.background_noise = j.value("background_noise", s.background_noise);
    s.jitter_sigma = j.value("jitter_sigma", s.jitter_sigma);
    if (j.contains("blur_velocity_threshold") && !j["blur_velocity_threshold"].is_null())
      s.blur_velocity_threshold = j["blur_velocity_threshold"].get<double>();
    if (j.contains("tracks")) {
      for (std::size_t i = 0; i < j["tracks"].size(); ++i) {
        const json& jt = j["tracks"][i];
        const std::string p = "script.tracks[" + std::to_string(i) + "]";
        MarkerTrack tr;
        if (jt.contains("color")) tr.color = color_from(jt["color"], p + ".color");
        tr.radius = jt.value("radius", tr.radius);
        for (const json& w : jt.at("path")) tr.path.push_back({w.at(0).get<double>(), w.at(1).get<double>(), w.at(2).get<double>()});
        if (jt.contains("hidden"))
          for (const json& h : jt["hidden"]) tr.hidden.emplace_back(h.at(0).get<double>(), h.at(1).get<double>());
        s.tracks.push_back(std::move(tr));
      }
    }
    if (j.contains("distractors")) {
      for (std::size_t i = 0; i < j["distractors"].size(); ++i) {
        const json& jd = j["distractors"][i];
        Distractor d;
        if (jd.contains("color")) d.color = color_from(jd["color"], "script.distractors[" + std::to_string(i) + "].color");
        d.x = jd.value("x", d.x);
        d.y = jd.value("y", d.y);
        d.radius = jd.value("radius", d.radius);
        s.distractors.push_back(d);
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError("script", e.what());
  }
  s.validate();
  return s;
}

std::pair<PointD, PointD> path_state(const MarkerTrack& track, double t) {
  const auto& p = track.path;
  if (p.empty()) return {{}, {}};
  if (t < p.front().t) return {{p.front().x, p.front().y}, {}};
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    const Waypoint& a = p[k];
    const Waypoint& b = p[k + 1];
    if (t >= a.t && t < b.t) {
      const double span = b.t - a.t;
      const double u = (t - a.t) / span;
      const PointD v{(b.x - a.x) / span, (b.y - a.y) / span};
      return {{a.x + u * (b.x - a.x), a.y + u * (b.y - a.y)}, v};
    }
  }
  return {{p.back().x, p.back().y}, {}};
}

void paint_disc(RgbFrame& f, PointD c, double radius, std::array<std::uint8_t, 3> rgb) {
  const int x0 = std::max(0, static_cast<int>(std::floor(c.x - radius)));
  const int x1 = std::min(f.width() - 1, static_cast<int>(std::ceil(c.x + radius)));
  const int y0 = std::max(0, static_cast<int>(std::floor(c.y - radius)));
  const int y1 = std::min(f.height() - 1, static_cast<int>(std::ceil(c.y + radius)));
  const double r2 = radius * radius;
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - c.x;
      const double dy = y - c.y;
      if (dx * dx + dy * dy <= r2) f.set(x, y, rgb[0], rgb[1], rgb[2]);
    }
}

void paint_capsule(RgbFrame& f, PointD a, PointD b, double radius, std::array<std::uint8_t, 3> rgb) {
  const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - radius)));
  const int x1 = std::min(f.width() - 1, static_cast<int>(std::ceil(std::max(a.x, b.x) + radius)));
  const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - radius)));
  const int y1 = std::min(f.height() - 1, static_cast<int>(std::ceil(std::max(a.y, b.y) + radius)));
  const double ux = b.x - a.x;
  const double uy = b.y - a.y;
  const double len2 = ux * ux + uy * uy;
  const double r2 = radius * radius;
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      double s = len2 > 0 ? ((x - a.x) * ux + (y - a.y) * uy) / len2 : 0.0;
      s = std::clamp(s, 0.0, 1.0);
      const double dx = x - (a.x + s * ux);
      const double dy = y - (a.y + s * uy);
      if (dx * dx + dy * dy <= r2) f.set(x, y, rgb[0], rgb[1], rgb[2]);
    }
}

SyntheticSequence::SyntheticSequence(SceneScript script, std::uint64_t seed)
    : script_(std::move(script)), seed_(seed) {
  script_.validate();
  count_ = script_.frame_count();
}

SynthFrame SyntheticSequence::render(std::size_t index) const {
  const SceneScript& s = script_;
  SynthFrame out{RgbFrame(s.width, s.height), s.timestamp_us(index), {}};
  const double t = out.t();
  std::mt19937_64 rng(splitmix64(seed_ ^ splitmix64(index + 1)));

  RgbFrame& f = out.frame;
  f.fill(s.background[0], s.background[1], s.background[2]);
  if (s.background_noise > 0) {
    std::uniform_int_distribution<int> noise(-s.background_noise, s.background_noise);
    for (std::uint8_t& c : f.pixels()) c = static_cast<std::uint8_t>(std::clamp(c + noise(rng), 0, 255));
  }

  for (const Distractor& d : s.distractors) paint_disc(f, {d.x, d.y}, d.radius, marker_rgb(d.color));

  std::normal_distribution<double> jitter(0.0, 1.0);
  const double exposure = 1.0 / s.fps;
  for (const MarkerTrack& tr : s.tracks) {
    const auto [pos, vel] = path_state(tr, t);
    MarkerTruth truth;
    truth.color = tr.color;
    truth.path_center = pos;
    truth.speed = std::hypot(vel.x, vel.y);
    // Draw jitter unconditionally so the random stream does not depend on visibility.
    const double jx = jitter(rng) * s.jitter_sigma;
    const double jy = jitter(rng) * s.jitter_sigma;
    truth.rendered_center = {pos.x + jx, pos.y + jy};
    truth.visible = !is_hidden(tr, t);
    truth.clean = truth.visible && truth.speed <= s.blur_velocity_threshold;
    if (truth.visible) {
      if (truth.clean) {
        paint_disc(f, truth.rendered_center, tr.radius, marker_rgb(tr.color));
      } else {
        const PointD half{vel.x * exposure / 2, vel.y * exposure / 2};
        const PointD c = truth.rendered_center;
        paint_capsule(f, {c.x - half.x, c.y - half.y}, {c.x + half.x, c.y + half.y}, tr.radius,
                      blurred_rgb(marker_rgb(tr.color)));
      }
    }
    out.truth.push_back(truth);
  }
  return out;
}

std::optional<SynthFrame> SyntheticSequence::next() {
  if (pos_ >= count_) return std::nullopt;
  return render(pos_++);
}

std::optional<TimedFrame> TruthFrameSource::next() {
  auto f = inner_.next();
  if (!f) return std::nullopt;
  truth_ = f->truth;
  return TimedFrame{std::move(f->frame), f->t()};
}

}  // namespace mm::harness
