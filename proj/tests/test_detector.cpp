#include <doctest.h>

#include <cmath>
#include <random>

#include "mm/detector.hpp"
#include "mm/errors.hpp"
#include "mm/harness/synth.hpp"
#include "support.hpp"

using namespace mm;
using harness::marker_rgb;
using harness::paint_disc;

namespace {

const auto kRed = marker_rgb(MarkerColor::Red);

HsFrame scene(std::initializer_list<std::pair<PointD, double>> discs, int w = 640, int h = 480) {
  RgbFrame f = testsupport::gray_frame(w, h);
  for (const auto& [c, r] : discs) paint_disc(f, c, r, kRed);
  return rgb_to_hs(f);
}

bool inside(PointI p, PointD c, double r) { return std::hypot(p.x - c.x, p.y - c.y) <= r; }

}  // namespace

TEST_CASE("default thresholds derive from the colour tolerance") {
  const DetectorConfig cfg;
  CHECK(cfg.response_threshold == contamination_threshold(MarkerTemplate::red(), cfg.region_color_tol, 0.25));
  CHECK_NOTHROW(cfg.validate());
  DetectorConfig bad;
  bad.area_min = 2000;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = DetectorConfig{};
  bad.stride = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("raster scan examples") {
  const auto tpl = MarkerTemplate::red();
  const DetectorConfig cfg;
  SUBCASE("seed inside the single disc") {
    OpCounter c;
    const auto s = raster_scan(scene({{{311.4, 207.8}, 12}}), tpl, cfg, c);
    REQUIRE(s);
    CHECK(inside(*s, {311.4, 207.8}, 12));
  }
  SUBCASE("pure background gives nothing") {
    OpCounter c;
    CHECK_FALSE(raster_scan(scene({}), tpl, cfg, c));
    // every stride-spaced position evaluated
    CHECK(c.positions == std::uint64_t((640 - 7) / 4 + 1) * ((480 - 7) / 4 + 1));
  }
  SUBCASE("scan-order first disc wins") {
    OpCounter c;
    const auto s = raster_scan(scene({{{500, 60}, 12}, {{100, 300}, 12}}), tpl, cfg, c);
    REQUIRE(s);
    CHECK(inside(*s, {500, 60}, 12));
  }
}

TEST_CASE("circular scan examples") {
  const auto tpl = MarkerTemplate::red();
  const DetectorConfig cfg;
  const int bound = (2 * cfg.search_window_half / cfg.stride + 1) * (2 * cfg.search_window_half / cfg.stride + 1);
  SUBCASE("unmoved marker is found in ring 0 or 1") {
    OpCounter c;
    const auto s = circular_scan(scene({{{320, 240}, 12}}), tpl, cfg, {322, 238}, c);
    REQUIRE(s);
    CHECK(std::max(std::abs(s->x - 322), std::abs(s->y - 238)) <= cfg.stride);
    CHECK(c.positions <= static_cast<std::uint64_t>(bound));
  }
  SUBCASE("marker beyond the window is not found") {
    OpCounter c;
    CHECK_FALSE(circular_scan(scene({{{470, 240}, 12}}), tpl, cfg, {320, 240}, c));
    CHECK(c.positions == static_cast<std::uint64_t>(bound));
  }
  SUBCASE("centre on the marker is a ring-0 hit") {
    OpCounter c;
    const auto s = circular_scan(scene({{{200, 150}, 12}}), tpl, cfg, {200, 150}, c);
    REQUIRE(s);
    CHECK(*s == PointI{200, 150});
    CHECK(c.positions == 1);
  }
  SUBCASE("windows off the frame are skipped") {
    OpCounter c;
    CHECK_FALSE(circular_scan(scene({}), tpl, cfg, {0, 0}, c));
    CHECK(c.positions < static_cast<std::uint64_t>(bound));
    CHECK_THROWS_AS(circular_scan(scene({}), tpl, cfg, {640, 0}, c), BoundsError);
  }
}

TEST_CASE("circular ring order visits the top edge first, then clockwise") {
  const auto tpl = MarkerTemplate::red();
  DetectorConfig cfg;
  cfg.search_window_half = 8;
  cfg.stride = 4;
  cfg.response_threshold = ~std::uint64_t{0};  // every position is a candidate
  std::vector<PointI> order;
  OpCounter c;
  circular_scan_each(scene({}), tpl, cfg, {100, 100}, c, [&](PointI p, ResponseValue) {
    order.push_back(p);
    return false;
  });
  REQUIRE(order.size() == 25);
  CHECK(order[0] == PointI{100, 100});
  CHECK(order[1] == PointI{96, 96});
  CHECK(order[2] == PointI{100, 96});
  CHECK(order[3] == PointI{104, 96});
  CHECK(order[4] == PointI{104, 100});
  CHECK(order[5] == PointI{104, 104});
  CHECK(order[6] == PointI{100, 104});
  CHECK(order[7] == PointI{96, 104});
  CHECK(order[8] == PointI{96, 100});
  CHECK(order[9] == PointI{92, 92});
}

TEST_CASE("ring responses equal the direct oracle") {
  std::mt19937_64 rng(31);
  const auto f = testsupport::random_hs(80, 80, rng);
  for (int stride : {1, 2, 3, 4, 5}) {
    DetectorConfig cfg;
    cfg.stride = stride;
    cfg.search_window_half = 20;
    cfg.response_threshold = ~std::uint64_t{0};
    const auto tpl = MarkerTemplate::red();
    OpCounter c;
    circular_scan_each(f, tpl, cfg, {37, 41}, c, [&](PointI p, ResponseValue rv) {
      CHECK(rv.value == testsupport::ssd_oracle(f, tpl, p.x, p.y));
      return false;
    });
  }
}

TEST_CASE("grow_region examples") {
  const auto tpl = MarkerTemplate::red();
  const DetectorConfig cfg;
  const auto hs = scene({{{100, 80}, 10}});
  SUBCASE("disc of radius 10") {
    const Region r = grow_region(hs, tpl, {100, 80}, cfg);
    CHECK(r.area >= std::lround(M_PI * 100 - 40));
    CHECK(r.area <= std::lround(M_PI * 100 + 40));
    CHECK(std::hypot(r.centroid.x - 100, r.centroid.y - 80) <= 0.5);
  }
  SUBCASE("seed on background") { CHECK(grow_region(hs, tpl, {300, 300}, cfg).area == 0); }
  SUBCASE("colour filling the frame stops at area_max + 1") {
    RgbFrame f(100, 100);
    f.fill(255, 0, 0);
    CHECK(grow_region(rgb_to_hs(f), tpl, {50, 50}, cfg).area == cfg.area_max + 1);
  }
  SUBCASE("seed outside the frame") { CHECK_THROWS_AS(grow_region(hs, tpl, {-1, 0}, cfg), BoundsError); }
}

TEST_CASE("detect examples") {
  const auto tpl = MarkerTemplate::red();
  const DetectorConfig cfg;
  SUBCASE("valid disc is detected at its centre") {
    OpCounter c;
    const auto d = detect(scene({{{250.3, 170.6}, 12}}), tpl, cfg, std::nullopt, c, 9);
    REQUIRE(d);
    CHECK(std::hypot(d->center.x - 250.3, d->center.y - 170.6) <= 1.0);
    CHECK(d->area > cfg.area_min);
    CHECK(d->area < cfg.area_max);
    CHECK(d->frame_index == 9);
  }
  SUBCASE("oversized disc alone is rejected") {
    OpCounter c;
    CHECK_FALSE(detect(scene({{{320, 240}, 30}}), tpl, cfg, std::nullopt, c));
  }
  SUBCASE("undersized dot alone is rejected") {
    OpCounter c;
    CHECK_FALSE(detect(scene({{{320, 240}, 5}}), tpl, cfg, std::nullopt, c));
  }
  SUBCASE("large blob plus valid disc yields the disc") {
    OpCounter c;
    const auto d = detect(scene({{{120, 100}, 40}, {{420, 330}, 12}, {{500, 60}, 4}}), tpl, cfg, std::nullopt, c);
    REQUIRE(d);
    CHECK(std::hypot(d->center.x - 420, d->center.y - 330) <= 1.0);
  }
  SUBCASE("circular detect near the previous centre") {
    OpCounter c;
    const auto d = detect(scene({{{330, 250}, 12}}), tpl, cfg, PointI{320, 240}, c);
    REQUIRE(d);
    CHECK(std::hypot(d->center.x - 330, d->center.y - 250) <= 1.0);
  }
}

TEST_CASE("property: detections pass the gate strictly and centroids are within 1 px") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> xd(40, 600), yd(40, 440), rd(7.5, 21.0);
  const auto tpl = MarkerTemplate::red();
  const DetectorConfig cfg;
  for (int i = 0; i < 60; ++i) {
    const PointD c{xd(rng), yd(rng)};
    const double r = rd(rng);
    OpCounter k;
    const auto d = detect(scene({{c, r}}), tpl, cfg, std::nullopt, k);
    if (!d) {
      // only discs the gate excludes may be missed
      const double area = M_PI * r * r;
      CHECK((area < cfg.area_min + 60 || area > cfg.area_max - 60));
      continue;
    }
    CHECK(d->area > cfg.area_min);
    CHECK(d->area < cfg.area_max);
    CHECK(std::hypot(d->center.x - c.x, d->center.y - c.y) <= 1.0);
  }
}

TEST_CASE("property: circular scan on a tracked marker costs no more than raster") {
  std::mt19937_64 rng(78);
  std::uniform_real_distribution<double> xd(60, 580), yd(60, 420), off(-10, 10);
  const auto tpl = MarkerTemplate::red();
  const DetectorConfig cfg;
  for (int i = 0; i < 30; ++i) {
    const PointD c{xd(rng), yd(rng)};
    const auto hs = scene({{c, 12}});
    OpCounter rc, cc;
    const auto r = detect(hs, tpl, cfg, std::nullopt, rc);
    const auto k = detect(hs, tpl, cfg, PointI{int(c.x + off(rng)), int(c.y + off(rng))}, cc);
    REQUIRE(r);
    REQUIRE(k);
    CHECK(*r == *k);
    CHECK(cc.positions <= rc.positions);
  }
}

TEST_CASE("property: detection is deterministic including counters") {
  const auto hs = scene({{{120, 100}, 40}, {{420, 330}, 12}});
  OpCounter a, b;
  const auto d1 = detect(hs, MarkerTemplate::red(), DetectorConfig{}, std::nullopt, a);
  const auto d2 = detect(hs, MarkerTemplate::red(), DetectorConfig{}, std::nullopt, b);
  CHECK(d1 == d2);
  CHECK(a == b);
}
