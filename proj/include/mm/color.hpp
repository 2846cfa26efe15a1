#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mm/geometry.hpp"

namespace mm {

/// Fixed-point scales for the hue/saturation planes. Hue is stored in
/// hundredths of a degree, saturation in ten-thousandths.
inline constexpr std::uint16_t kHueScale = 100;
inline constexpr std::uint16_t kSatScale = 10000;
inline constexpr std::uint16_t kHueFull = 360 * kHueScale;  // exclusive bound
inline constexpr std::uint16_t kSatMax = kSatScale;

/// Packed 8-bit RGB image, row-major.
class RgbFrame {
 public:
  RgbFrame(int width, int height);
  RgbFrame(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  Size size() const noexcept { return {width_, height_}; }

  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::span<std::uint8_t> pixels() noexcept { return pixels_; }

  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);
  void fill(std::uint8_t r, std::uint8_t g, std::uint8_t b);

  friend bool operator==(const RgbFrame&, const RgbFrame&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> pixels_;
};

struct HueSat {
  std::uint16_t hue = 0;
  std::uint16_t sat = 0;
  friend bool operator==(const HueSat&, const HueSat&) = default;
};

/// Quantized hue and saturation planes. This is the only pixel
/// representation seen by the matcher and detector.
class HsFrame {
 public:
  HsFrame(int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  Size size() const noexcept { return {width_, height_}; }

  /// Bounds-checked access; throws BoundsError.
  HueSat at(int x, int y) const;

  // Unchecked row access for kernels.
  const std::uint16_t* hue_row(int y) const noexcept { return hue_.data() + static_cast<std::size_t>(y) * width_; }
  const std::uint16_t* sat_row(int y) const noexcept { return sat_.data() + static_cast<std::size_t>(y) * width_; }
  std::uint16_t* hue_row(int y) noexcept { return hue_.data() + static_cast<std::size_t>(y) * width_; }
  std::uint16_t* sat_row(int y) noexcept { return sat_.data() + static_cast<std::size_t>(y) * width_; }

  std::span<const std::uint16_t> hue() const noexcept { return hue_; }
  std::span<const std::uint16_t> sat() const noexcept { return sat_; }

  void set(int x, int y, HueSat v);

  friend bool operator==(const HsFrame&, const HsFrame&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint16_t> hue_;
  std::vector<std::uint16_t> sat_;
};

/// HSI hue and saturation of one pixel, quantized.
HueSat rgb_to_hs(std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// Per-pixel conversion of a whole frame. Intensity is not stored.
HsFrame rgb_to_hs(const RgbFrame& frame);

/// hs_at: quantized pair at (x, y); throws BoundsError outside the frame.
inline HueSat hs_at(const HsFrame& frame, int x, int y) { return frame.at(x, y); }

}  // namespace mm
