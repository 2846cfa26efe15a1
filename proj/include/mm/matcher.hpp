#pragma once

#include <compare>
#include <cstdint>
#include <string_view>
#include <vector>

#include "mm/color.hpp"
#include "mm/geometry.hpp"

namespace mm {

enum class MarkerColor { Red, Green };

std::string_view to_string(MarkerColor c) noexcept;

/// Reference hue/saturation and mask geometry for one marker color.
///
/// The response at a pixel is the weighted sum of squared hue and saturation
/// differences over the mask window centred on it. Differences are plain
/// integer differences of quantized values, with no hue wrap-around, so a
/// red reference at 0 degrees treats 359.x degree pixels as far away.
struct MarkerTemplate {
  MarkerColor color = MarkerColor::Red;
  std::uint16_t ref_hue = 0;
  std::uint16_t ref_sat = kSatMax;
  int mask_width = 7;   // odd, >= 3
  int mask_height = 7;  // odd, >= 3
  std::uint32_t w1 = 1;
  std::uint32_t w2 = 1;

  int half_w() const noexcept { return (mask_width - 1) / 2; }
  int half_h() const noexcept { return (mask_height - 1) / 2; }

  /// Throws ConfigError naming the offending field relative to `path`.
  void validate(std::string_view path = "template") const;

  static MarkerTemplate red();
  static MarkerTemplate green();

  friend bool operator==(const MarkerTemplate&, const MarkerTemplate&) = default;
};

/// SSD score; lower is a better match, zero is a perfect match.
struct ResponseValue {
  std::uint64_t value = 0;
  friend auto operator<=>(const ResponseValue&, const ResponseValue&) = default;
};

/// Explicit operation accumulator. `terms` counts per-pixel weighted
/// squared-difference evaluations, `positions` counts response values produced.
struct OpCounter {
  std::uint64_t terms = 0;
  std::uint64_t positions = 0;

  OpCounter& operator+=(const OpCounter& o) noexcept {
    terms += o.terms;
    positions += o.positions;
    return *this;
  }
  friend bool operator==(const OpCounter&, const OpCounter&) = default;
};

enum class SlideDirection { LeftToRight, RightToLeft, TopToBottom, BottomToTop };

/// Unit step of a slide direction.
PointI step_of(SlideDirection dir) noexcept;

/// Weighted squared distance of one quantized pixel to the template reference.
inline std::uint64_t pixel_distance(const MarkerTemplate& tpl, std::uint16_t hue, std::uint16_t sat) noexcept {
  const std::int64_t dh = static_cast<std::int64_t>(hue) - tpl.ref_hue;
  const std::int64_t ds = static_cast<std::int64_t>(sat) - tpl.ref_sat;
  return tpl.w1 * static_cast<std::uint64_t>(dh * dh) + tpl.w2 * static_cast<std::uint64_t>(ds * ds);
}

/// True when the whole mask window centred at `c` lies inside the frame.
bool window_fits(Size frame, const MarkerTemplate& tpl, PointI c) noexcept;

/// Whether sliding by `stride` along an axis of the given mask extent costs
/// fewer term evaluations than recomputing the window (2*stride < extent).
constexpr bool incremental_pays(int stride, int extent) noexcept { return 2 * stride < extent; }

/// Full windowed SSD at `center`. Throws BoundsError if the window does not fit.
ResponseValue response_direct(const HsFrame& frame, const MarkerTemplate& tpl, PointI center,
                              OpCounter* counter = nullptr);

/// Response at `from + stride * step_of(dir)` given the exact response `prev`
/// at `from`: adds the entering rows/columns and subtracts the exiting ones.
/// Requires 1 <= stride < mask extent along the slide axis (ParameterError)
/// and both windows inside the frame (BoundsError).
ResponseValue response_incremental(const HsFrame& frame, const MarkerTemplate& tpl, ResponseValue prev,
                                   PointI from, int stride, SlideDirection dir,
                                   OpCounter* counter = nullptr);

struct RowResponse {
  int x = 0;
  ResponseValue value;
  friend bool operator==(const RowResponse&, const RowResponse&) = default;
};

/// Responses at x = ha, ha+stride, ... along row `y` while windows fit. The
/// first is computed directly, the rest by sliding when that is cheaper.
/// A frame narrower than the mask yields an empty list.
std::vector<RowResponse> response_row(const HsFrame& frame, const MarkerTemplate& tpl, int y, int stride,
                                      OpCounter* counter = nullptr);

/// Walks stride-spaced positions along one row lazily, producing the same
/// values as response_row. Used by scanners that stop at the first hit.
class RowWalker {
 public:
  RowWalker(const HsFrame& frame, const MarkerTemplate& tpl, int y, int stride, OpCounter* counter);

  bool done() const noexcept { return x_ > last_x_; }
  int x() const noexcept { return x_; }
  ResponseValue value();  // computes the response at x() on first call
  void advance();

 private:
  const HsFrame& frame_;
  const MarkerTemplate& tpl_;
  OpCounter* counter_;
  int y_;
  int stride_;
  int x_;
  int last_x_;
  bool slide_;
  bool have_prev_ = false;
  bool have_cur_ = false;
  int prev_x_ = 0;
  ResponseValue prev_;
  ResponseValue cur_;
};

}  // namespace mm
