#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mm/harness/synth.hpp"

namespace mm::harness {

// Fixture container, little-endian:
//   "MMFX" | u32 header_len | header JSON (header_len bytes)
//   then per frame: u8 codec (0 raw, 1 zlib) | u32 payload_len | payload
// The header holds the script, seed, dimensions, fps and a "frames" table
// with each frame's timestamp (microseconds) and ground truth.
inline constexpr char kFixtureMagic[4] = {'M', 'M', 'F', 'X'};
inline constexpr int kFixtureVersion = 1;

enum class Codec : std::uint8_t { Raw = 0, Zlib = 1 };

/// Renders every frame of `seq` into a fixture file. Throws FormatError on I/O failure.
void write_fixture(const std::string& path, const SyntheticSequence& seq, Codec codec = Codec::Zlib);

/// Sequential reader; also a TruthSource so it can drive replay directly.
class FixtureReader final : public TruthSource {
 public:
  /// Throws FormatError for a missing or malformed file.
  explicit FixtureReader(const std::string& path);

  const nlohmann::ordered_json& header() const noexcept { return header_; }
  SceneScript script() const;
  std::uint64_t seed() const;
  std::size_t size() const noexcept { return frames_; }

  std::optional<SynthFrame> next() override;

 private:
  std::ifstream in_;
  nlohmann::ordered_json header_;
  std::size_t frames_ = 0;
  std::size_t pos_ = 0;
  int width_ = 0;
  int height_ = 0;
};

/// Reads a whole fixture into memory.
std::vector<SynthFrame> read_fixture(const std::string& path);

}  // namespace mm::harness
