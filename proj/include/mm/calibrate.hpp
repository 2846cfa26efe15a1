#pragma once

#include "mm/color.hpp"
#include "mm/matcher.hpp"

namespace mm {

struct Rect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;
};

/// Samples below this saturation are rejected: the region is achromatic and
/// carries no usable hue.
inline constexpr std::uint16_t kMinCalibrationSat = 2000;

/// Reference hue/saturation sampled from a frame region. Hue is the median of
/// the samples' offsets around their circular mean, so a red patch straddling
/// 0/360 degrees is re-centred on its actual colour. Throws ParameterError
/// for an empty or out-of-frame region, or a low-saturation sample.
HueSat sample_reference(const HsFrame& frame, Rect region);

/// `base` with its reference replaced by sample_reference(frame, region).
MarkerTemplate calibrate_template(const HsFrame& frame, Rect region, const MarkerTemplate& base);

}  // namespace mm
