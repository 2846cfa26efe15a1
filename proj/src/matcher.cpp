#include "mm/matcher.hpp"

#include <string>

#include "mm/errors.hpp"

namespace mm {

namespace {

// Sum of pixel distances over the inclusive block [x0,x1] x [y0,y1].
std::uint64_t block_sum(const HsFrame& frame, const MarkerTemplate& tpl, int x0, int x1, int y0, int y1,
                        OpCounter* counter) {
  std::uint64_t sum = 0;
  for (int y = y0; y <= y1; ++y) {
    const std::uint16_t* hue = frame.hue_row(y);
    const std::uint16_t* sat = frame.sat_row(y);
    for (int x = x0; x <= x1; ++x) sum += pixel_distance(tpl, hue[x], sat[x]);
  }
  if (counter) counter->terms += static_cast<std::uint64_t>(x1 - x0 + 1) * (y1 - y0 + 1);
  return sum;
}

std::string where(PointI c) { return "(" + std::to_string(c.x) + ", " + std::to_string(c.y) + ")"; }

}  // namespace

std::string_view to_string(MarkerColor c) noexcept { return c == MarkerColor::Red ? "red" : "green"; }

void MarkerTemplate::validate(std::string_view path) const {
  const std::string p(path);
  if (mask_width < 3 || mask_width % 2 == 0) throw ConfigError(p + ".mask_width", "must be odd and >= 3");
  if (mask_height < 3 || mask_height % 2 == 0) throw ConfigError(p + ".mask_height", "must be odd and >= 3");
  if (w1 + static_cast<std::uint64_t>(w2) == 0) throw ConfigError(p + ".w1", "w1 + w2 must be > 0");
  if (w1 > 65535 || w2 > 65535) throw ConfigError(p + ".w1", "weights must be <= 65535");
  if (ref_hue >= kHueFull) throw ConfigError(p + ".ref_hue", "must be < 36000");
  if (ref_sat > kSatMax) throw ConfigError(p + ".ref_sat", "must be <= 10000");
}

MarkerTemplate MarkerTemplate::red() { return MarkerTemplate{}; }

MarkerTemplate MarkerTemplate::green() {
  MarkerTemplate t;
  t.color = MarkerColor::Green;
  t.ref_hue = 120 * kHueScale;
  return t;
}

PointI step_of(SlideDirection dir) noexcept {
  switch (dir) {
    case SlideDirection::LeftToRight: return {1, 0};
    case SlideDirection::RightToLeft: return {-1, 0};
    case SlideDirection::TopToBottom: return {0, 1};
    case SlideDirection::BottomToTop: return {0, -1};
  }
  return {0, 0};
}

bool window_fits(Size frame, const MarkerTemplate& tpl, PointI c) noexcept {
  const int ha = tpl.half_w();
  const int hb = tpl.half_h();
  return c.x >= ha && c.x < frame.width - ha && c.y >= hb && c.y < frame.height - hb;
}

ResponseValue response_direct(const HsFrame& frame, const MarkerTemplate& tpl, PointI c, OpCounter* counter) {
  if (!window_fits(frame.size(), tpl, c)) throw BoundsError("mask window at " + where(c) + " leaves the frame");
  const int ha = tpl.half_w();
  const int hb = tpl.half_h();
  const std::uint64_t v = block_sum(frame, tpl, c.x - ha, c.x + ha, c.y - hb, c.y + hb, counter);
  if (counter) ++counter->positions;
  return {v};
}

ResponseValue response_incremental(const HsFrame& frame, const MarkerTemplate& tpl, ResponseValue prev,
                                   PointI from, int stride, SlideDirection dir, OpCounter* counter) {
  const PointI unit = step_of(dir);
  const bool horizontal = unit.x != 0;
  const int extent = horizontal ? tpl.mask_width : tpl.mask_height;
  if (stride < 1 || stride >= extent)
    throw ParameterError("stride " + std::to_string(stride) + " outside [1, " + std::to_string(extent - 1) + "]");
  const PointI to{from.x + unit.x * stride, from.y + unit.y * stride};
  if (!window_fits(frame.size(), tpl, from)) throw BoundsError("previous window at " + where(from) + " leaves the frame");
  if (!window_fits(frame.size(), tpl, to)) throw BoundsError("new window at " + where(to) + " leaves the frame");

  const int ha = tpl.half_w();
  const int hb = tpl.half_h();
  std::uint64_t add = 0;
  std::uint64_t sub = 0;
  switch (dir) {
    case SlideDirection::LeftToRight:
      add = block_sum(frame, tpl, from.x + ha + 1, to.x + ha, from.y - hb, from.y + hb, counter);
      sub = block_sum(frame, tpl, from.x - ha, to.x - ha - 1, from.y - hb, from.y + hb, counter);
      break;
    case SlideDirection::RightToLeft:
      add = block_sum(frame, tpl, to.x - ha, from.x - ha - 1, from.y - hb, from.y + hb, counter);
      sub = block_sum(frame, tpl, to.x + ha + 1, from.x + ha, from.y - hb, from.y + hb, counter);
      break;
    case SlideDirection::TopToBottom:
      add = block_sum(frame, tpl, from.x - ha, from.x + ha, from.y + hb + 1, to.y + hb, counter);
      sub = block_sum(frame, tpl, from.x - ha, from.x + ha, from.y - hb, to.y - hb - 1, counter);
      break;
    case SlideDirection::BottomToTop:
      add = block_sum(frame, tpl, from.x - ha, from.x + ha, to.y - hb, from.y - hb - 1, counter);
      sub = block_sum(frame, tpl, from.x - ha, from.x + ha, to.y + hb + 1, from.y + hb, counter);
      break;
  }
  if (counter) ++counter->positions;
  // prev contains every exiting term, so prev + add - sub never underflows.
  return {prev.value + add - sub};
}

RowWalker::RowWalker(const HsFrame& frame, const MarkerTemplate& tpl, int y, int stride, OpCounter* counter)
    : frame_(frame),
      tpl_(tpl),
      counter_(counter),
      y_(y),
      stride_(stride),
      x_(tpl.half_w()),
      last_x_(frame.width() - tpl.half_w() - 1),
      slide_(incremental_pays(stride, tpl.mask_width)) {
  if (stride < 1) throw ParameterError("stride must be >= 1");
  if (frame.width() >= tpl.mask_width && (y < tpl.half_h() || y >= frame.height() - tpl.half_h()))
    throw BoundsError("row " + std::to_string(y) + " admits no mask window");
  if (frame.height() < tpl.mask_height) last_x_ = x_ - 1;  // nothing fits
}

ResponseValue RowWalker::value() {
  if (!have_cur_) {
    if (slide_ && have_prev_ && prev_x_ + stride_ == x_)
      cur_ = response_incremental(frame_, tpl_, prev_, {prev_x_, y_}, stride_, SlideDirection::LeftToRight, counter_);
    else
      cur_ = response_direct(frame_, tpl_, {x_, y_}, counter_);
    have_cur_ = true;
  }
  return cur_;
}

void RowWalker::advance() {
  if (have_cur_) {
    prev_ = cur_;
    prev_x_ = x_;
    have_prev_ = true;
  } else {
    have_prev_ = false;
  }
  have_cur_ = false;
  x_ += stride_;
}

std::vector<RowResponse> response_row(const HsFrame& frame, const MarkerTemplate& tpl, int y, int stride,
                                      OpCounter* counter) {
  std::vector<RowResponse> out;
  if (frame.width() < tpl.mask_width || frame.height() < tpl.mask_height) return out;
  RowWalker walk(frame, tpl, y, stride, counter);
  for (; !walk.done(); walk.advance()) out.push_back({walk.x(), walk.value()});
  return out;
}

}  // namespace mm
