#include "mm/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "mm/errors.hpp"

namespace mm {

namespace {

template <typename T>
T median_of(std::vector<T> v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

}  // namespace

HueSat sample_reference(const HsFrame& frame, Rect r) {
  if (r.width <= 0 || r.height <= 0) throw ParameterError("calibration region is empty");
  if (r.x < 0 || r.y < 0 || r.x + r.width > frame.width() || r.y + r.height > frame.height())
    throw ParameterError("calibration region leaves the frame");

  std::vector<std::uint16_t> sats;
  std::vector<std::uint16_t> hues;
  double cx = 0.0;
  double cy = 0.0;
  for (int y = r.y; y < r.y + r.height; ++y) {
    for (int x = r.x; x < r.x + r.width; ++x) {
      const HueSat hs = frame.at(x, y);
      sats.push_back(hs.sat);
      hues.push_back(hs.hue);
      const double a = hs.hue / static_cast<double>(kHueScale) * std::numbers::pi / 180.0;
      cx += std::cos(a);
      cy += std::sin(a);
    }
  }
  const std::uint16_t sat = median_of(sats);
  if (sat < kMinCalibrationSat)
    throw ParameterError("sample saturation " + std::to_string(sat / static_cast<double>(kSatScale)) +
                         " is too low; sample the coloured marker, not the background");

  double mean_deg = std::atan2(cy, cx) * 180.0 / std::numbers::pi;
  if (mean_deg < 0) mean_deg += 360.0;
  const long mean_q = std::lround(mean_deg * kHueScale) % kHueFull;

  std::vector<long> offsets;
  offsets.reserve(hues.size());
  for (std::uint16_t h : hues) {
    long d = static_cast<long>(h) - mean_q;
    if (d > kHueFull / 2) d -= kHueFull;
    if (d < -kHueFull / 2) d += kHueFull;
    offsets.push_back(d);
  }
  long hue = (mean_q + median_of(offsets)) % kHueFull;
  if (hue < 0) hue += kHueFull;
  return {static_cast<std::uint16_t>(hue), sat};
}

MarkerTemplate calibrate_template(const HsFrame& frame, Rect region, const MarkerTemplate& base) {
  const HueSat ref = sample_reference(frame, region);
  MarkerTemplate t = base;
  t.ref_hue = ref.hue;
  t.ref_sat = ref.sat;
  return t;
}

}  // namespace mm
