#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "mm/errors.hpp"
#include "mm/gestures.hpp"

using namespace mm;

namespace {

constexpr double kFps = 30.0;
const Size kFrame{640, 480};
const Size kScreen{1920, 1080};

using Pos = std::optional<PointD>;

struct Sample {
  double t;
  Pos red;
  Pos green;
};

struct Run {
  std::vector<GestureEvent> all;
  std::vector<GestureKind> discrete;
  std::vector<MachineState> before;  // state before each step
};

Run drive(const std::vector<Sample>& samples, const GestureConfig& cfg = {}) {
  Run r;
  MachineState ms;
  std::uint64_t i = 0;
  for (const Sample& s : samples) {
    r.before.push_back(ms);
    auto out = machine_step(ms, s.red, s.green, s.t, cfg, kFrame, kScreen, i++);
    CHECK(std::count_if(out.events.begin(), out.events.end(), [](const auto& e) { return is_discrete(e.kind); }) <= 1);
    for (const auto& e : out.events) {
      r.all.push_back(e);
      if (is_discrete(e.kind)) r.discrete.push_back(e.kind);
    }
    ms = out.state;
  }
  return r;
}

// Frames from t0 (inclusive) to t1 (exclusive) at kFps with positions from f.
void append(std::vector<Sample>& v, double t0, double t1, const std::function<Sample(double)>& f) {
  const long first = std::lround(t0 * kFps), last = std::lround(t1 * kFps);
  for (long i = first; i < last; ++i) v.push_back(f(i / kFps));
}

std::vector<Sample> red_dwell_then(PointD anchor, double hold, PointD target) {
  std::vector<Sample> v;
  append(v, 0, hold, [&](double t) { return Sample{t, anchor, std::nullopt}; });
  v.push_back({hold, target, std::nullopt});
  return v;
}

std::vector<Sample> green_dwell_then(PointD anchor, double hold, PointD target) {
  std::vector<Sample> v;
  append(v, 0, hold, [&](double t) { return Sample{t, std::nullopt, anchor}; });
  v.push_back({hold, std::nullopt, target});
  return v;
}

std::vector<Sample> zoom(double from, double to) {
  std::vector<Sample> v;
  append(v, 0, 0.5, [&](double t) { return Sample{t, PointD{300 - from / 2, 240}, PointD{300 + from / 2, 240}}; });
  v.push_back({0.5, PointD{300 - to / 2, 240}, PointD{300 + to / 2, 240}});
  return v;
}

using K = GestureKind;
using KV = std::vector<GestureKind>;

}  // namespace

TEST_CASE("red dwell then move: clicks") {
  const GestureConfig cfg;
  const double m = cfg.move_threshold + 1;
  CHECK(drive(red_dwell_then({300, 200}, 2.1, {300, 200 - m})).discrete == KV{K::LeftClick});
  CHECK(drive(red_dwell_then({300, 200}, 2.1, {300 + m, 200})).discrete == KV{K::RightClick});
  CHECK(drive(red_dwell_then({300, 200}, 2.1, {300, 200 + m})).discrete == KV{K::DoubleClick});
}

TEST_CASE("red dwell then move left is not a command") {
  CHECK(drive(red_dwell_then({300, 200}, 2.1, {250, 200})).discrete.empty());
}

TEST_CASE("green dwell then move: forward and backward") {
  CHECK(drive(green_dwell_then({300, 200}, 2.1, {341, 200})).discrete == KV{K::Forward});
  CHECK(drive(green_dwell_then({300, 200}, 2.1, {259, 200})).discrete == KV{K::Backward});
  CHECK(drive(green_dwell_then({300, 200}, 2.1, {300, 150})).discrete.empty());
}

TEST_CASE("zoom on inter-marker distance") {
  const GestureConfig cfg;
  CHECK(drive(zoom(80, 80 + cfg.zoom_threshold + 1)).discrete == KV{K::ZoomIn});
  CHECK(drive(zoom(80 + cfg.zoom_threshold + 1, 80)).discrete == KV{K::ZoomOut});
  CHECK(drive(zoom(80, 80 + cfg.zoom_threshold - 1)).discrete.empty());
}

TEST_CASE("zoom re-anchors after each step") {
  std::vector<Sample> v;
  // distance ramps 80 -> 200 over 2 s: one ZoomIn per 30 px after re-entry
  append(v, 0, 2.0, [](double t) {
    const double d = 80 + 60 * t;
    return Sample{t, PointD{300 - d / 2, 240}, PointD{300 + d / 2, 240}};
  });
  const auto r = drive(v);
  CHECK(r.discrete.size() >= 3);
  for (K k : r.discrete) CHECK(k == K::ZoomIn);
}

TEST_CASE("losing a marker during zoom resets tracking") {
  std::vector<Sample> v;
  append(v, 0, 0.3, [](double t) { return Sample{t, PointD{260, 240}, PointD{340, 240}}; });
  v.push_back({0.3, PointD{260, 240}, std::nullopt});
  v.push_back({0.34, PointD{240, 240}, PointD{360, 240}});  // re-entry anchors at 120
  v.push_back({0.37, PointD{240, 240}, PointD{370, 240}});
  CHECK(drive(v).discrete.empty());
}

TEST_CASE("short dwell gives cursor events only") {
  const auto r = drive(red_dwell_then({300, 200}, 1.5, {300, 150}));
  CHECK(r.discrete.empty());
  CHECK(r.all.size() == static_cast<std::size_t>(std::lround(1.5 * kFps)) + 1);
  for (const auto& e : r.all) CHECK(e.kind == K::CursorMove);
}

TEST_CASE("wandering restarts the dwell timer") {
  const GestureConfig cfg;
  const PointD a{300, 200};
  const PointD b{300 + 2 * cfg.dwell_radius, 200};
  std::vector<Sample> v;
  append(v, 0, 1.0, [&](double t) { return Sample{t, a, std::nullopt}; });
  append(v, 1.0, 2.9, [&](double t) { return Sample{t, b, std::nullopt}; });
  SUBCASE("moving before a full dwell from the exit") {
    v.push_back({2.9, PointD{b.x, b.y - 41}, std::nullopt});
    CHECK(drive(v).discrete.empty());
  }
  SUBCASE("full dwell measured from the exit") {
    append(v, 2.9, 3.1, [&](double t) { return Sample{t, b, std::nullopt}; });
    v.push_back({3.1, PointD{b.x, b.y - 41}, std::nullopt});
    CHECK(drive(v).discrete == KV{K::LeftClick});
  }
}

TEST_CASE("after a command the machine returns to Start and needs a fresh dwell") {
  auto v = red_dwell_then({300, 200}, 2.1, {300, 159});
  const double t0 = v.back().t;
  append(v, t0 + 1 / kFps, t0 + 1.0, [](double t) { return Sample{t, PointD{300, 159}, std::nullopt}; });
  v.push_back({t0 + 1.0, PointD{341, 159}, std::nullopt});
  const auto r = drive(v);
  CHECK(r.discrete == KV{K::LeftClick});
}

TEST_CASE("cursor events come first and use the screen mapping") {
  const auto r = drive(red_dwell_then({320, 240}, 2.1, {320, 199}));
  REQUIRE(r.all.size() >= 2);
  CHECK(r.all.front().kind == K::CursorMove);
  CHECK(r.all.front().screen == PointI{960, 540});
  CHECK(r.all[r.all.size() - 2].kind == K::CursorMove);
  CHECK(r.all.back().kind == K::LeftClick);
}

TEST_CASE("diagonal moves below dominance give nothing") {
  CHECK(drive(red_dwell_then({300, 200}, 2.1, {340, 160})).discrete.empty());
  CHECK(drive(red_dwell_then({300, 200}, 2.1, {345, 170})).discrete == KV{K::RightClick});
}

TEST_CASE("time going backwards is rejected") {
  MachineState ms;
  ms = machine_step(ms, PointD{1, 1}, std::nullopt, 1.0, {}, kFrame, kScreen).state;
  CHECK_THROWS_AS(machine_step(ms, PointD{1, 1}, std::nullopt, 0.5, {}, kFrame, kScreen), ParameterError);
  CHECK_NOTHROW(machine_step(ms, PointD{1, 1}, std::nullopt, 1.0, {}, kFrame, kScreen));
}

TEST_CASE("map_to_screen examples") {
  CHECK(map_to_screen({0, 0}, kFrame, kScreen) == PointI{0, 0});
  CHECK(map_to_screen({320, 240}, kFrame, kScreen) == PointI{960, 540});
  CHECK(map_to_screen({639, 479}, kFrame, kScreen) == PointI{1917, 1077});
  CHECK(map_to_screen({700, -5}, kFrame, kScreen) == PointI{1919, 0});
  CHECK_THROWS_AS(map_to_screen({0, 0}, {0, 480}, kScreen), ParameterError);
  CHECK_THROWS_AS(map_to_screen({0, 0}, kFrame, {1920, 0}), ParameterError);
}

TEST_CASE("gesture names round-trip") {
  for (K k : {K::CursorMove, K::LeftClick, K::RightClick, K::DoubleClick, K::ZoomIn, K::ZoomOut, K::Forward,
              K::Backward})
    CHECK(gesture_from_string(to_string(k)) == k);
  CHECK(to_string(K::LeftClick) == "left_click");
  CHECK_FALSE(gesture_from_string("wave"));
}

TEST_CASE("config validation and width scaling") {
  GestureConfig c;
  CHECK_NOTHROW(c.validate());
  const GestureConfig s = c.scaled_for_width(1280);
  CHECK(s.dwell_radius == doctest::Approx(30));
  CHECK(s.move_threshold == doctest::Approx(80));
  CHECK(s.zoom_threshold == doctest::Approx(60));
  CHECK(s.dwell_time == c.dwell_time);
  c.axis_dominance = 0.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

namespace {

// Random walk with holds, jumps, and marker dropouts.
std::vector<Sample> fuzz_trajectory(std::mt19937_64& rng, int frames) {
  std::uniform_real_distribution<double> u(0, 1);
  std::normal_distribution<double> small(0, 2.0);
  PointD r{320, 240}, g{400, 240};
  int mode = 0;  // 0 red only, 1 green only, 2 both, 3 none
  std::vector<Sample> v;
  for (int i = 0; i < frames; ++i) {
    if (u(rng) < 0.01) mode = static_cast<int>(u(rng) * 4);
    const bool jump = u(rng) < 0.03;
    auto move = [&](PointD& p) {
      if (jump) {
        p.x += (u(rng) - 0.5) * 160;
        p.y += (u(rng) - 0.5) * 160;
      } else {
        p.x += small(rng);
        p.y += small(rng);
      }
      p.x = std::clamp(p.x, 0.0, 639.0);
      p.y = std::clamp(p.y, 0.0, 479.0);
    };
    move(r);
    move(g);
    Pos rp = (mode == 0 || mode == 2) ? Pos{r} : std::nullopt;
    Pos gp = (mode == 1 || mode == 2) ? Pos{g} : std::nullopt;
    v.push_back({i / kFps, rp, gp});
  }
  return v;
}

}  // namespace

TEST_CASE("property: exclusivity, dwell necessity and direction soundness under fuzzing") {
  const GestureConfig cfg;
  std::mt19937_64 rng(99);
  int commands = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto v = fuzz_trajectory(rng, 900);
    MachineState ms;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto out = machine_step(ms, v[i].red, v[i].green, v[i].t, cfg, kFrame, kScreen, i);
      int discrete = 0;
      for (const auto& e : out.events) {
        if (!is_discrete(e.kind)) continue;
        ++discrete;
        if (e.kind == K::ZoomIn || e.kind == K::ZoomOut) {
          REQUIRE(v[i].red);
          REQUIRE(v[i].green);
          continue;
        }
        ++commands;
        const bool red_cmd = e.kind == K::LeftClick || e.kind == K::RightClick || e.kind == K::DoubleClick;
        auto marker = [&](std::size_t k) { return red_cmd ? v[k].red : v[k].green; };
        auto other = [&](std::size_t k) { return red_cmd ? v[k].green : v[k].red; };
        // an uninterrupted single-marker run j..i containing a dwell of at least T
        bool dwelled = false;
        for (std::size_t j = i; j-- > 0 && marker(j) && !other(j);) {
          std::size_t k = j;
          while (k + 1 < i && distance(*marker(k + 1), *marker(j)) <= cfg.dwell_radius) ++k;
          if (v[k].t - v[j].t >= cfg.dwell_time) {
            dwelled = true;
            break;
          }
        }
        CHECK(dwelled);
        // direction from the armed anchor
        const PointD d{marker(i)->x - ms.anchor.x, marker(i)->y - ms.anchor.y};
        const bool horizontal = std::abs(d.x) >= std::abs(d.y);
        const double dom = horizontal ? d.x : d.y, oth = horizontal ? d.y : d.x;
        CHECK(std::abs(dom) >= cfg.axis_dominance * std::abs(oth));
        CHECK(std::abs(dom) >= cfg.move_threshold);
        switch (e.kind) {
          case K::LeftClick: CHECK((!horizontal && dom < 0)); break;
          case K::RightClick: CHECK((horizontal && dom > 0)); break;
          case K::DoubleClick: CHECK((!horizontal && dom > 0)); break;
          case K::Forward: CHECK((horizontal && dom > 0)); break;
          case K::Backward: CHECK((horizontal && dom < 0)); break;
          default: break;
        }
      }
      REQUIRE(discrete <= 1);
      ms = out.state;
    }
  }
  CHECK(commands > 0);  // the fuzzer actually reaches the commands
}

TEST_CASE("property: mirroring x swaps forward and backward for green") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ax(150, 490), ay(100, 380), off(-6, 6);
  for (int trial = 0; trial < 40; ++trial) {
    const PointD a{ax(rng), ay(rng)};
    const double dx = (trial % 2 ? 1 : -1) * (50 + off(rng));
    const double dy = off(rng);
    std::vector<Sample> v, m;
    append(v, 0, 2.2, [&](double t) { return Sample{t, std::nullopt, PointD{a.x + off(rng) / 2, a.y}}; });
    v.push_back({2.2, std::nullopt, PointD{a.x + dx, a.y + dy}});
    for (const Sample& s : v) m.push_back({s.t, std::nullopt, PointD{639 - s.green->x, s.green->y}});
    const auto kv = drive(v).discrete, km = drive(m).discrete;
    REQUIRE(kv.size() == 1);
    REQUIRE(km.size() == 1);
    CHECK(km[0] == (kv[0] == K::Forward ? K::Backward : K::Forward));
  }
}
