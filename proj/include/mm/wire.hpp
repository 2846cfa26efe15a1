#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mm/color.hpp"
#include "mm/pipeline.hpp"

namespace mm::wire {

// Binary frame message, little-endian:
//   0  magic "MMF1"
//   4  frame_id      u32
//   8  width         u16
//  10  height        u16
//  12  pixel_format  u8 (0 = RGB8)
//  13  timestamp_us  u64
//  21  payload       width * height * 3 bytes
inline constexpr std::array<std::uint8_t, 4> kFrameMagic{'M', 'M', 'F', '1'};
inline constexpr std::size_t kHeaderSize = 21;
inline constexpr std::uint8_t kPixelRgb8 = 0;
inline constexpr int kProtocolVersion = 1;

struct FrameHeader {
  std::uint32_t frame_id = 0;
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::uint8_t pixel_format = kPixelRgb8;
  std::uint64_t timestamp_us = 0;

  std::size_t payload_size() const noexcept { return static_cast<std::size_t>(width) * height * 3; }
  friend bool operator==(const FrameHeader&, const FrameHeader&) = default;
};

std::array<std::uint8_t, kHeaderSize> encode_header(const FrameHeader& h);

/// Throws FormatError on a wrong magic.
FrameHeader decode_header(std::span<const std::uint8_t, kHeaderSize> bytes);

/// Header plus payload for one RGB frame.
std::vector<std::uint8_t> encode_frame(std::uint32_t frame_id, std::uint64_t timestamp_us, const RgbFrame& frame);

/// Engine timestamps are seconds; the wire carries integer microseconds.
inline double seconds_from_us(std::uint64_t us) noexcept { return static_cast<double>(us) * 1e-6; }

// Server-to-client lines (no trailing newline).
std::string handshake_line(int max_dim);
std::string ack_line(std::uint32_t frame_id);
std::string error_line(const std::string& message, std::optional<std::uint32_t> frame_id = std::nullopt);

/// Event lines for one processed frame: cursor and gesture events in emission
/// order, then a status line with both track states.
std::vector<std::string> event_lines(const FrameReport& report, std::uint32_t frame_id);

}  // namespace mm::wire
