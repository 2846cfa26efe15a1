#include "mm/harness/fixture.hpp"

#include <algorithm>
#include <cstring>

#include <zlib.h>

#include "mm/errors.hpp"

namespace mm::harness {

using json = nlohmann::ordered_json;

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw FormatError("fixture truncated");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

json truth_json(const MarkerTruth& m) {
  return {{"color", std::string(to_string(m.color))},
          {"path", {m.path_center.x, m.path_center.y}},
          {"rendered", {m.rendered_center.x, m.rendered_center.y}},
          {"speed", m.speed},
          {"visible", m.visible},
          {"clean", m.clean}};
}

MarkerTruth truth_from(const json& j) {
  MarkerTruth m;
  m.color = j.at("color").get<std::string>() == "green" ? MarkerColor::Green : MarkerColor::Red;
  m.path_center = {j.at("path").at(0).get<double>(), j.at("path").at(1).get<double>()};
  m.rendered_center = {j.at("rendered").at(0).get<double>(), j.at("rendered").at(1).get<double>()};
  m.speed = j.at("speed").get<double>();
  m.visible = j.at("visible").get<bool>();
  m.clean = j.at("clean").get<bool>();
  return m;
}

}  // namespace

void write_fixture(const std::string& path, const SyntheticSequence& seq, Codec codec) {
  std::vector<SynthFrame> frames;
  frames.reserve(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) frames.push_back(seq.render(i));

  json table = json::array();
  for (const SynthFrame& f : frames) {
    json truth = json::array();
    for (const MarkerTruth& m : f.truth) truth.push_back(truth_json(m));
    table.push_back({{"t_us", f.t_us}, {"truth", std::move(truth)}});
  }
  const SceneScript& s = seq.script();
  const json header{{"format", "mmfx"},
                    {"version", kFixtureVersion},
                    {"seed", seq.seed()},
                    {"width", s.width},
                    {"height", s.height},
                    {"fps", s.fps},
                    {"frame_count", frames.size()},
                    {"codec", codec == Codec::Zlib ? "zlib" : "raw"},
                    {"script", to_json(s)},
                    {"frames", std::move(table)}};
  const std::string head = header.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot create fixture " + path);
  out.write(kFixtureMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(head.size()));
  out.write(head.data(), static_cast<std::streamsize>(head.size()));

  std::vector<unsigned char> buf;
  for (const SynthFrame& f : frames) {
    const auto px = f.frame.pixels();
    if (codec == Codec::Zlib) {
      uLongf len = compressBound(static_cast<uLong>(px.size()));
      buf.resize(len);
      if (compress2(buf.data(), &len, px.data(), static_cast<uLong>(px.size()), Z_BEST_SPEED) != Z_OK)
        throw FormatError("zlib compression failed");
      out.put(static_cast<char>(Codec::Zlib));
      put_u32(out, static_cast<std::uint32_t>(len));
      out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(len));
    } else {
      out.put(static_cast<char>(Codec::Raw));
      put_u32(out, static_cast<std::uint32_t>(px.size()));
      out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
    }
  }
  if (!out) throw FormatError("failed writing fixture " + path);
}

FixtureReader::FixtureReader(const std::string& path) : in_(path, std::ios::binary) {
  if (!in_) throw FormatError("cannot open fixture " + path);
  char magic[4];
  if (!in_.read(magic, 4) || std::memcmp(magic, kFixtureMagic, 4) != 0) throw FormatError(path + ": not a fixture file");
  const std::uint32_t len = get_u32(in_);
  std::string head(len, '\0');
  if (!in_.read(head.data(), len)) throw FormatError(path + ": truncated header");
  try {
    header_ = json::parse(head);
    if (header_.at("version").get<int>() != kFixtureVersion) throw FormatError(path + ": unsupported version");
    width_ = header_.at("width").get<int>();
    height_ = header_.at("height").get<int>();
    frames_ = header_.at("frames").size();
  } catch (const json::exception& e) {
    throw FormatError(path + ": bad header: " + e.what());
  }
}

SceneScript FixtureReader::script() const { return scene_from_json(header_.at("script")); }

std::uint64_t FixtureReader::seed() const { return header_.at("seed").get<std::uint64_t>(); }

std::optional<SynthFrame> FixtureReader::next() {
  if (pos_ >= frames_) return std::nullopt;
  const int codec = in_.get();
  if (codec == EOF) throw FormatError("fixture truncated at frame " + std::to_string(pos_));
  const std::uint32_t len = get_u32(in_);
  std::vector<unsigned char> payload(len);
  if (!in_.read(reinterpret_cast<char*>(payload.data()), len))
    throw FormatError("fixture truncated at frame " + std::to_string(pos_));

  std::vector<std::uint8_t> px(static_cast<std::size_t>(width_) * height_ * 3);
  if (codec == static_cast<int>(Codec::Zlib)) {
    uLongf out_len = static_cast<uLongf>(px.size());
    if (uncompress(px.data(), &out_len, payload.data(), len) != Z_OK || out_len != px.size())
      throw FormatError("corrupt zlib payload at frame " + std::to_string(pos_));
  } else if (codec == static_cast<int>(Codec::Raw)) {
    if (len != px.size()) throw FormatError("raw payload size mismatch at frame " + std::to_string(pos_));
    std::copy(payload.begin(), payload.end(), px.begin());
  } else {
    throw FormatError("unknown codec at frame " + std::to_string(pos_));
  }

  const json& row = header_["frames"][pos_];
  SynthFrame f{RgbFrame(width_, height_, std::move(px)), row.at("t_us").get<std::uint64_t>(), {}};
  for (const json& m : row.at("truth")) f.truth.push_back(truth_from(m));
  ++pos_;
  return f;
}

std::vector<SynthFrame> read_fixture(const std::string& path) {
  FixtureReader r(path);
  std::vector<SynthFrame> out;
  while (auto f = r.next()) out.push_back(std::move(*f));
  return out;
}

}  // namespace mm::harness
