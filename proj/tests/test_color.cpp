#include <doctest.h>

#include <random>

#include "mm/color.hpp"
#include "mm/errors.hpp"
#include "support.hpp"

using namespace mm;

TEST_CASE("pure red sits at the hue origin with full saturation") {
  const HueSat v = rgb_to_hs(255, 0, 0);
  CHECK(v.hue == 0);
  CHECK(v.sat == kSatMax);
}

TEST_CASE("achromatic and black pixels have zero hue and saturation") {
  CHECK(rgb_to_hs(100, 100, 100) == HueSat{0, 0});
  CHECK(rgb_to_hs(0, 0, 0) == HueSat{0, 0});
  CHECK(rgb_to_hs(255, 255, 255) == HueSat{0, 0});
}

TEST_CASE("(10,200,30) matches the double-precision oracle") {
  const HueSat v = rgb_to_hs(10, 200, 30);
  const HueSat o = testsupport::hsi_oracle(10, 200, 30);
  CHECK(v == o);
  // by hand: acos(-105 / sqrt(32700)) = 125.4964 deg, B <= G; S = 1 - 30/240
  CHECK(v.hue == 12550);
  CHECK(v.sat == 8750);
}

TEST_CASE("primaries and secondaries land on their textbook hues") {
  CHECK(rgb_to_hs(0, 255, 0).hue == 12000);
  CHECK(rgb_to_hs(0, 0, 255).hue == 24000);
  CHECK(rgb_to_hs(255, 255, 0).hue == 6000);
  CHECK(rgb_to_hs(255, 0, 255).hue == 30000);
}

TEST_CASE("lookup conversion agrees with the oracle on random pixels") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> d(0, 255);
  int mismatches = 0;
  for (int i = 0; i < 200000; ++i) {
    const int r = d(rng), g = d(rng), b = d(rng);
    const HueSat v = rgb_to_hs(static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(b));
    const HueSat o = testsupport::hsi_oracle(r, g, b);
    // rounding at exact .5 boundaries may differ by one step between formula arrangements
    const int dh = std::abs(int(v.hue) - int(o.hue));
    if (std::min(dh, 36000 - dh) > 1 || std::abs(int(v.sat) - int(o.sat)) > 1) ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("hs_at bounds") {
  RgbFrame rgb(8, 6);
  rgb.fill(255, 0, 0);
  const HsFrame hs = rgb_to_hs(rgb);
  CHECK(hs_at(hs, 0, 0) == HueSat{0, kSatMax});
  CHECK_NOTHROW(hs_at(hs, 7, 5));
  CHECK_THROWS_AS(hs_at(hs, 8, 0), BoundsError);
  CHECK_THROWS_AS(hs_at(hs, 0, 6), BoundsError);
  CHECK_THROWS_AS(hs_at(hs, -1, 0), BoundsError);
}

TEST_CASE("frame construction rejects bad dimensions and payloads") {
  CHECK_THROWS_AS(RgbFrame(0, 4), ParameterError);
  CHECK_THROWS_AS(RgbFrame(2, 2, std::vector<std::uint8_t>(11)), ParameterError);
}

TEST_CASE("property: hue is invariant to intensity scaling within two steps") {
  // exact multiples keep all channels integral, so the only error left is quantization
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> d(0, 255);
  std::uniform_int_distribution<int> md(1, 8);
  int checked = 0;
  for (int i = 0; i < 100000; ++i) {
    const int m = md(rng);
    const int r = d(rng) / m, g = d(rng) / m, b = d(rng) / m;
    const HueSat lo = rgb_to_hs(r, g, b);
    const HueSat hi = rgb_to_hs(r * m, g * m, b * m);
    const int dh = std::abs(int(lo.hue) - int(hi.hue));
    CHECK(std::min(dh, 36000 - dh) <= 2);
    CHECK(std::abs(int(lo.sat) - int(hi.sat)) <= 2);
    ++checked;
  }
  CHECK(checked == 100000);
}

TEST_CASE("property: conversion is deterministic") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> d(0, 255);
  std::vector<std::uint8_t> px(64 * 48 * 3);
  for (auto& p : px) p = static_cast<std::uint8_t>(d(rng));
  const RgbFrame f(64, 48, px);
  CHECK(rgb_to_hs(f) == rgb_to_hs(f));
  CHECK(rgb_to_hs(f).at(5, 7) == rgb_to_hs(px[(7 * 64 + 5) * 3], px[(7 * 64 + 5) * 3 + 1], px[(7 * 64 + 5) * 3 + 2]));
}
