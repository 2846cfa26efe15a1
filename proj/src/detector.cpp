#include "mm/detector.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "mm/errors.hpp"

namespace mm {

void DetectorConfig::validate(std::string_view path) const {
  const std::string p(path);
  if (stride < 1) throw ConfigError(p + ".stride", "must be >= 1");
  if (area_min <= 0) throw ConfigError(p + ".area_min", "must be > 0");
  if (area_min >= area_max) throw ConfigError(p + ".area_min", "must be < area_max");
  if (search_window_half < stride) throw ConfigError(p + ".search_window_half", "must be >= stride");
}

std::uint64_t contamination_threshold(const MarkerTemplate& tpl, std::uint64_t color_tol, double fraction) {
  const double cells = static_cast<double>(tpl.mask_width) * tpl.mask_height;
  return static_cast<std::uint64_t>(std::llround(cells * fraction * static_cast<double>(color_tol)));
}

void raster_scan_each(const HsFrame& frame, const MarkerTemplate& tpl, const DetectorConfig& cfg,
                      OpCounter& counter, const SeedVisitor& visit) {
  if (frame.width() < tpl.mask_width || frame.height() < tpl.mask_height) return;
  for (int y = tpl.half_h(); y < frame.height() - tpl.half_h(); y += cfg.stride) {
    for (RowWalker walk(frame, tpl, y, cfg.stride, &counter); !walk.done(); walk.advance()) {
      const ResponseValue rv = walk.value();
      if (rv.value < cfg.response_threshold && visit({walk.x(), y}, rv)) return;
    }
  }
}

namespace {

struct RingStep {
  PointI pos;
  SlideDirection arrived_by;  // direction from the previous position on the ring
  bool chained;               // previous position is exactly one stride away
};

// Positions of ring r (r >= 1) in traversal order: top edge left to right,
// right edge downward, bottom edge right to left, left edge upward.
template <typename F>
void for_each_ring_position(PointI c, int r, int d, F&& f) {
  PointI p{c.x - r * d, c.y - r * d};
  f(RingStep{p, SlideDirection::LeftToRight, false});
  auto walk = [&](SlideDirection dir, int steps) {
    const PointI u = step_of(dir);
    for (int i = 0; i < steps; ++i) {
      p = {p.x + u.x * d, p.y + u.y * d};
      f(RingStep{p, dir, true});
    }
  };
  walk(SlideDirection::LeftToRight, 2 * r);
  walk(SlideDirection::TopToBottom, 2 * r);
  walk(SlideDirection::RightToLeft, 2 * r);
  walk(SlideDirection::BottomToTop, 2 * r - 1);
}

}  // namespace

void circular_scan_each(const HsFrame& frame, const MarkerTemplate& tpl, const DetectorConfig& cfg,
                        PointI prev_center, OpCounter& counter, const SeedVisitor& visit) {
  if (prev_center.x < 0 || prev_center.y < 0 || prev_center.x >= frame.width() || prev_center.y >= frame.height())
    throw BoundsError("circular scan centre outside the frame");
  const int d = cfg.stride;
  const int rings = cfg.search_window_half / d;
  const Size size = frame.size();

  if (window_fits(size, tpl, prev_center)) {
    const ResponseValue rv = response_direct(frame, tpl, prev_center, &counter);
    if (rv.value < cfg.response_threshold && visit(prev_center, rv)) return;
  }

  bool stop = false;
  for (int r = 1; r <= rings && !stop; ++r) {
    bool have_prev = false;
    ResponseValue prev;
    PointI prev_pos;
    for_each_ring_position(prev_center, r, d, [&](const RingStep& s) {
      if (stop) return;
      if (!window_fits(size, tpl, s.pos)) {
        have_prev = false;
        return;
      }
      const bool horizontal = s.arrived_by == SlideDirection::LeftToRight || s.arrived_by == SlideDirection::RightToLeft;
      const int extent = horizontal ? tpl.mask_width : tpl.mask_height;
      ResponseValue rv;
      if (s.chained && have_prev && incremental_pays(d, extent))
        rv = response_incremental(frame, tpl, prev, prev_pos, d, s.arrived_by, &counter);
      else
        rv = response_direct(frame, tpl, s.pos, &counter);
      prev = rv;
      prev_pos = s.pos;
      have_prev = true;
      if (rv.value < cfg.response_threshold && visit(s.pos, rv)) stop = true;
    });
  }
}

std::optional<PointI> raster_scan(const HsFrame& frame, const MarkerTemplate& tpl, const DetectorConfig& cfg,
                                  OpCounter& counter) {
  std::optional<PointI> hit;
  raster_scan_each(frame, tpl, cfg, counter, [&](PointI p, ResponseValue) {
    hit = p;
    return true;
  });
  return hit;
}

std::optional<PointI> circular_scan(const HsFrame& frame, const MarkerTemplate& tpl, const DetectorConfig& cfg,
                                    PointI prev_center, OpCounter& counter) {
  std::optional<PointI> hit;
  circular_scan_each(frame, tpl, cfg, prev_center, counter, [&](PointI p, ResponseValue) {
    hit = p;
    return true;
  });
  return hit;
}

namespace {

enum Label : std::uint8_t { kFree = 0, kRejectedLarge = 1, kRejectedSmall = 2, kCurrent = 3 };

struct FillResult {
  int area = 0;
  PointD centroid;
  bool merged_large = false;  // touched a region already rejected as too large
};

// Flood fill that writes kCurrent into `labels` for collected pixels; the
// caller relabels them. `pixels` receives collected linear indices.
FillResult flood_fill(const HsFrame& frame, const MarkerTemplate& tpl, PointI seed, const DetectorConfig& cfg,
                      std::vector<std::uint8_t>& labels, std::vector<int>& pixels) {
  FillResult res;
  pixels.clear();
  const int w = frame.width();
  const int h = frame.height();
  const auto hue = frame.hue();
  const auto sat = frame.sat();
  auto inside_tol = [&](int i) { return pixel_distance(tpl, hue[i], sat[i]) <= cfg.region_color_tol; };

  const int seed_i = seed.y * w + seed.x;
  if (labels[seed_i] != kFree || !inside_tol(seed_i)) return res;

  const std::size_t cap = static_cast<std::size_t>(cfg.area_max) + 1;
  std::vector<int> stack{seed_i};
  labels[seed_i] = kCurrent;
  double sx = 0.0;
  double sy = 0.0;
  while (!stack.empty() && pixels.size() < cap && !res.merged_large) {
    const int i = stack.back();
    stack.pop_back();
    pixels.push_back(i);
    const int x = i % w;
    const int y = i / w;
    sx += x;
    sy += y;
    const int nbrs[4] = {x > 0 ? i - 1 : -1, x + 1 < w ? i + 1 : -1, y > 0 ? i - w : -1, y + 1 < h ? i + w : -1};
    for (int n : nbrs) {
      if (n < 0) continue;
      const std::uint8_t l = labels[n];
      if (l == kRejectedLarge) {
        if (inside_tol(n)) res.merged_large = true;
        continue;
      }
      if (l != kFree || !inside_tol(n)) continue;
      labels[n] = kCurrent;
      stack.push_back(n);
    }
  }
  // Pixels still queued were claimed but not counted; release them.
  for (int i : stack) labels[i] = kFree;
  res.area = static_cast<int>(pixels.size());
  if (res.area > 0) res.centroid = {sx / res.area, sy / res.area};
  return res;
}

void check_seed(const HsFrame& frame, PointI seed) {
  if (seed.x < 0 || seed.y < 0 || seed.x >= frame.width() || seed.y >= frame.height())
    throw BoundsError("seed outside the frame");
}

}  // namespace

Region grow_region(const HsFrame& frame, const MarkerTemplate& tpl, PointI seed, const DetectorConfig& cfg) {
  check_seed(frame, seed);
  std::vector<std::uint8_t> labels(static_cast<std::size_t>(frame.width()) * frame.height(), kFree);
  std::vector<int> pixels;
  const FillResult f = flood_fill(frame, tpl, seed, cfg, labels, pixels);
  return {f.area, f.centroid};
}

std::optional<Detection> detect(const HsFrame& frame, const MarkerTemplate& tpl, const DetectorConfig& cfg,
                                std::optional<PointI> prev, OpCounter& counter, std::uint64_t frame_index) {
  std::vector<std::uint8_t> labels;
  std::vector<int> pixels;
  std::optional<Detection> found;

  auto visit = [&](PointI seed, ResponseValue rv) {
    if (labels.empty()) labels.assign(static_cast<std::size_t>(frame.width()) * frame.height(), kFree);
    const FillResult f = flood_fill(frame, tpl, seed, cfg, labels, pixels);
    if (f.area == 0) return false;
    const bool too_large = f.merged_large || f.area >= cfg.area_max;
    const bool too_small = f.area <= cfg.area_min;
    if (!too_large && !too_small) {
      const PointI c{static_cast<int>(std::lround(f.centroid.x)), static_cast<int>(std::lround(f.centroid.y))};
      found = Detection{c, f.area, rv, frame_index};
      return true;
    }
    const std::uint8_t mark = too_large ? kRejectedLarge : kRejectedSmall;
    for (int i : pixels) labels[i] = mark;
    return false;
  };

  if (prev)
    circular_scan_each(frame, tpl, cfg, *prev, counter, visit);
  else
    raster_scan_each(frame, tpl, cfg, counter, visit);
  return found;
}

}  // namespace mm
