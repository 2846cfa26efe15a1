#include "mm/wire.hpp"

#include <algorithm>

#include <json.hpp>

#include "mm/errors.hpp"

namespace mm::wire {

using json = nlohmann::ordered_json;

namespace {

template <typename T>
void put_le(std::uint8_t* out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

template <typename T>
T get_le(const std::uint8_t* in) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(in[i]) << (8 * i);
  return v;
}

}  // namespace

std::array<std::uint8_t, kHeaderSize> encode_header(const FrameHeader& h) {
  std::array<std::uint8_t, kHeaderSize> b{};
  std::copy(kFrameMagic.begin(), kFrameMagic.end(), b.begin());
  put_le(b.data() + 4, h.frame_id);
  put_le(b.data() + 8, h.width);
  put_le(b.data() + 10, h.height);
  b[12] = h.pixel_format;
  put_le(b.data() + 13, h.timestamp_us);
  return b;
}

FrameHeader decode_header(std::span<const std::uint8_t, kHeaderSize> b) {
  if (!std::equal(kFrameMagic.begin(), kFrameMagic.end(), b.begin())) throw FormatError("bad frame magic");
  FrameHeader h;
  h.frame_id = get_le<std::uint32_t>(b.data() + 4);
  h.width = get_le<std::uint16_t>(b.data() + 8);
  h.height = get_le<std::uint16_t>(b.data() + 10);
  h.pixel_format = b[12];
  h.timestamp_us = get_le<std::uint64_t>(b.data() + 13);
  return h;
}

std::vector<std::uint8_t> encode_frame(std::uint32_t frame_id, std::uint64_t timestamp_us, const RgbFrame& frame) {
  if (frame.width() > 0xFFFF || frame.height() > 0xFFFF) throw ParameterError("frame too large for the wire format");
  FrameHeader h{frame_id, static_cast<std::uint16_t>(frame.width()), static_cast<std::uint16_t>(frame.height()),
                kPixelRgb8, timestamp_us};
  const auto head = encode_header(h);
  std::vector<std::uint8_t> out(head.begin(), head.end());
  const auto px = frame.pixels();
  out.insert(out.end(), px.begin(), px.end());
  return out;
}

std::string handshake_line(int max_dim) {
  return json{{"proto", kProtocolVersion}, {"pixel_formats", json::array({kPixelRgb8})}, {"max_dim", max_dim}}.dump();
}

std::string ack_line(std::uint32_t frame_id) { return json{{"type", "ack"}, {"frame_id", frame_id}}.dump(); }

std::string error_line(const std::string& message, std::optional<std::uint32_t> frame_id) {
  json j{{"type", "error"}, {"message", message}};
  if (frame_id) j["frame_id"] = *frame_id;
  return j.dump();
}

std::vector<std::string> event_lines(const FrameReport& report, std::uint32_t frame_id) {
  std::vector<std::string> lines;
  for (const GestureEvent& e : report.events) {
    if (e.kind == GestureKind::CursorMove)
      lines.push_back(json{{"type", "cursor"}, {"frame_id", frame_id}, {"x", e.screen.x}, {"y", e.screen.y}}.dump());
    else
      lines.push_back(json{{"type", "gesture"}, {"frame_id", frame_id}, {"name", std::string(to_string(e.kind))}}.dump());
  }
  lines.push_back(json{{"type", "status"},
                       {"frame_id", frame_id},
                       {"red", std::string(to_string(report.red_track.status))},
                       {"green", std::string(to_string(report.green_track.status))}}
                      .dump());
  return lines;
}

}  // namespace mm::wire
