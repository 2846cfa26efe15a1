#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "mm/color.hpp"
#include "mm/matcher.hpp"

namespace testsupport {

/// Textbook HSI in double precision, quantized the same way as the tables.
inline mm::HueSat hsi_oracle(int r, int g, int b) {
  const double R = r, G = g, B = b;
  const double sum = R + G + B;
  double s = 0.0;
  if (sum > 0) s = 1.0 - 3.0 * std::min({R, G, B}) / sum;
  double h = 0.0;
  const double den = std::sqrt((R - G) * (R - G) + (R - B) * (G - B));
  if (den > 0) {
    double c = 0.5 * ((R - G) + (R - B)) / den;
    c = std::max(-1.0, std::min(1.0, c));
    const double theta = std::acos(c) * 180.0 / std::numbers::pi;
    h = B <= G ? theta : 360.0 - theta;
  }
  long hq = std::lround(h * 100.0);
  if (hq >= 36000) hq -= 36000;
  long sq = std::lround(s * 10000.0);
  return {static_cast<std::uint16_t>(hq), static_cast<std::uint16_t>(std::clamp(sq, 0L, 10000L))};
}

inline mm::HsFrame random_hs(int w, int h, std::mt19937_64& rng, int hue_max = 36000, int sat_max = 10001) {
  mm::HsFrame f(w, h);
  std::uniform_int_distribution<int> hd(0, hue_max - 1), sd(0, sat_max - 1);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      f.set(x, y, {static_cast<std::uint16_t>(hd(rng)), static_cast<std::uint16_t>(sd(rng))});
  return f;
}

inline mm::HsFrame uniform_hs(int w, int h, mm::HueSat v) {
  mm::HsFrame f(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) f.set(x, y, v);
  return f;
}

/// Naive double loop of the weighted SSD, independent of the kernels.
inline std::uint64_t ssd_oracle(const mm::HsFrame& f, const mm::MarkerTemplate& t, int cx, int cy) {
  std::uint64_t sum = 0;
  for (int dy = -t.half_h(); dy <= t.half_h(); ++dy)
    for (int dx = -t.half_w(); dx <= t.half_w(); ++dx) {
      const mm::HueSat p = f.at(cx + dx, cy + dy);
      const long long a = static_cast<long long>(p.hue) - t.ref_hue;
      const long long b = static_cast<long long>(p.sat) - t.ref_sat;
      sum += static_cast<std::uint64_t>(t.w1) * static_cast<std::uint64_t>(a * a) +
             static_cast<std::uint64_t>(t.w2) * static_cast<std::uint64_t>(b * b);
    }
  return sum;
}

inline mm::RgbFrame gray_frame(int w, int h) {
  mm::RgbFrame f(w, h);
  f.fill(128, 128, 128);
  return f;
}

}  // namespace testsupport
