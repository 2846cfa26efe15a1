#include "mm/color.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "mm/errors.hpp"

namespace mm {

namespace {

// Hue depends only on (R-G, R-B) and saturation only on (min, R+G+B), so
// both are tabulated once. The tables are filled from the same
// double-precision formulas a scalar conversion would use.
constexpr int kDiffSpan = 511;  // -255..255
constexpr int kSumSpan = 766;   // 0..765

std::uint16_t hue_from_diffs(int r_minus_g, int r_minus_b) {
  const int g_minus_b = r_minus_b - r_minus_g;
  const double num = 0.5 * (r_minus_g + r_minus_b);
  const double den2 = static_cast<double>(r_minus_g) * r_minus_g +
                      static_cast<double>(r_minus_b) * g_minus_b;
  if (den2 <= 0.0) return 0;  // achromatic
  const double cos_theta = std::clamp(num / std::sqrt(den2), -1.0, 1.0);
  double deg = std::acos(cos_theta) * 180.0 / std::numbers::pi;
  if (g_minus_b < 0) deg = 360.0 - deg;  // B > G
  long q = std::lround(deg * kHueScale);
  if (q >= kHueFull) q -= kHueFull;
  return static_cast<std::uint16_t>(q);
}

std::uint16_t sat_from_min_sum(int min_c, int sum) {
  if (sum == 0) return 0;
  const double s = 1.0 - 3.0 * min_c / static_cast<double>(sum);
  return static_cast<std::uint16_t>(std::clamp<long>(std::lround(s * kSatScale), 0, kSatMax));
}

struct Tables {
  std::vector<std::uint16_t> hue;  // kDiffSpan^2
  std::vector<std::uint16_t> sat;  // 256 * kSumSpan

  Tables() : hue(static_cast<std::size_t>(kDiffSpan) * kDiffSpan), sat(256 * kSumSpan) {
    for (int dg = -255; dg <= 255; ++dg)
      for (int db = -255; db <= 255; ++db)
        hue[(dg + 255) * kDiffSpan + (db + 255)] = hue_from_diffs(dg, db);
    for (int m = 0; m < 256; ++m)
      for (int s = 0; s < kSumSpan; ++s) sat[m * kSumSpan + s] = sat_from_min_sum(m, s);
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

inline HueSat convert(const Tables& t, int r, int g, int b) {
  const int mn = std::min({r, g, b});
  return {t.hue[(r - g + 255) * kDiffSpan + (r - b + 255)], t.sat[mn * kSumSpan + (r + g + b)]};
}

void check_dims(int width, int height) {
  if (width < 1 || height < 1)
    throw ParameterError("frame dimensions must be >= 1, got " + std::to_string(width) + "x" +
                         std::to_string(height));
}

}  // namespace

RgbFrame::RgbFrame(int width, int height) : width_(width), height_(height) {
  check_dims(width, height);
  pixels_.assign(static_cast<std::size_t>(width) * height * 3, 0);
}

RgbFrame::RgbFrame(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dims(width, height);
  if (pixels_.size() != static_cast<std::size_t>(width) * height * 3)
    throw ParameterError("pixel buffer length " + std::to_string(pixels_.size()) +
                         " does not match " + std::to_string(width) + "x" +
                         std::to_string(height) + "x3");
}

void RgbFrame::set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) throw BoundsError("RgbFrame::set out of bounds");
  auto* p = pixels_.data() + (static_cast<std::size_t>(y) * width_ + x) * 3;
  p[0] = r;
  p[1] = g;
  p[2] = b;
}

void RgbFrame::fill(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  for (std::size_t i = 0; i < pixels_.size(); i += 3) {
    pixels_[i] = r;
    pixels_[i + 1] = g;
    pixels_[i + 2] = b;
  }
}

HsFrame::HsFrame(int width, int height) : width_(width), height_(height) {
  check_dims(width, height);
  hue_.assign(static_cast<std::size_t>(width) * height, 0);
  sat_.assign(static_cast<std::size_t>(width) * height, 0);
}

HueSat HsFrame::at(int x, int y) const {
  if (x < 0 || y < 0 || x >= width_ || y >= height_)
    throw BoundsError("hs_at(" + std::to_string(x) + ", " + std::to_string(y) + ") outside " +
                      std::to_string(width_) + "x" + std::to_string(height_));
  const auto i = static_cast<std::size_t>(y) * width_ + x;
  return {hue_[i], sat_[i]};
}

void HsFrame::set(int x, int y, HueSat v) {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) throw BoundsError("HsFrame::set out of bounds");
  const auto i = static_cast<std::size_t>(y) * width_ + x;
  hue_[i] = v.hue;
  sat_[i] = v.sat;
}

HueSat rgb_to_hs(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return convert(tables(), r, g, b);
}

HsFrame rgb_to_hs(const RgbFrame& frame) {
  const Tables& t = tables();
  HsFrame out(frame.width(), frame.height());
  const auto px = frame.pixels();
  for (int y = 0; y < frame.height(); ++y) {
    const std::uint8_t* src = px.data() + static_cast<std::size_t>(y) * frame.width() * 3;
    std::uint16_t* hue = out.hue_row(y);
    std::uint16_t* sat = out.sat_row(y);
    for (int x = 0; x < frame.width(); ++x, src += 3) {
      const HueSat hs = convert(t, src[0], src[1], src[2]);
      hue[x] = hs.hue;
      sat[x] = hs.sat;
    }
  }
  return out;
}

}  // namespace mm
