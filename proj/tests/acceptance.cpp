// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "mm/harness/bench.hpp"
#include "mm/harness/fixture.hpp"
#include "mm/harness/replay.hpp"
#include "mm/harness/scenarios.hpp"
#include "mm/harness/synth.hpp"
#include "mm/matcher.hpp"
#include "mm/service.hpp"
#include "mm/tracker.hpp"
#include "mm/wire.hpp"

#ifndef MM_FIXTURE_DIR
#define MM_FIXTURE_DIR "fixtures"
#endif

using namespace mm;
using namespace mm::harness;

namespace {

struct Outcome {
  enum Kind { Pass, Fail, Warn } kind;
  std::string detail;
};

int failures = 0;

void report(const char* id, const char* name, const std::function<Outcome()>& run) {
  Outcome o;
  try {
    o = run();
  } catch (const std::exception& e) {
    o = {Outcome::Fail, std::string("exception: ") + e.what()};
  }
  const char* tag = o.kind == Outcome::Pass ? "PASS" : o.kind == Outcome::Warn ? "WARN" : "FAIL";
  if (o.kind == Outcome::Fail) ++failures;
  std::printf("[%s] %-4s %s: %s\n", tag, id, name, o.detail.c_str());
  std::fflush(stdout);
}

Outcome verdict(bool ok, std::string detail) { return {ok ? Outcome::Pass : Outcome::Fail, std::move(detail)}; }

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

HsFrame random_hs(int w, int h, std::mt19937_64& rng) {
  HsFrame f(w, h);
  std::uniform_int_distribution<int> hd(0, kHueFull - 1), sd(0, kSatMax);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) f.set(x, y, {static_cast<std::uint16_t>(hd(rng)), static_cast<std::uint16_t>(sd(rng))});
  return f;
}

// ---- criteria ----

Outcome incremental_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  int mismatches = 0;
  const int cases = 10000;
  for (int i = 0; i < cases; ++i) {
    MarkerTemplate t;
    t.mask_width = 3 + 2 * static_cast<int>(rng() % 7);
    t.mask_height = 3 + 2 * static_cast<int>(rng() % 7);
    t.ref_hue = static_cast<std::uint16_t>(rng() % kHueFull);
    t.ref_sat = static_cast<std::uint16_t>(rng() % (kSatMax + 1));
    t.w1 = static_cast<std::uint32_t>(rng() % 16);
    t.w2 = static_cast<std::uint32_t>(1 + rng() % 16);
    const auto dir = static_cast<SlideDirection>(rng() % 4);
    const PointI s = step_of(dir);
    const int extent = s.x ? t.mask_width : t.mask_height;
    const int d = 1 + static_cast<int>(rng() % (extent - 1));
    const int w = t.mask_width + d + static_cast<int>(rng() % 24);
    const int h = t.mask_height + d + static_cast<int>(rng() % 24);
    const HsFrame f = random_hs(w, h, rng);
    const int lox = t.half_w() + std::max(0, -s.x * d), hix = w - 1 - t.half_w() - std::max(0, s.x * d);
    const int loy = t.half_h() + std::max(0, -s.y * d), hiy = h - 1 - t.half_h() - std::max(0, s.y * d);
    const PointI from{lox + static_cast<int>(rng() % (hix - lox + 1)), loy + static_cast<int>(rng() % (hiy - loy + 1))};
    const ResponseValue prev = response_direct(f, t, from);
    const ResponseValue inc = response_incremental(f, t, prev, from, d, dir);
    const ResponseValue dir_v = response_direct(f, t, {from.x + d * s.x, from.y + d * s.y});
    if (inc != dir_v) ++mismatches;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return verdict(mismatches == 0 && secs < 30.0,
                 fmt("%.0f cases, %.0f mismatches, %.2f s (limit 30 s)", cases, mismatches, secs));
}

Outcome count_model() {
  const int W = 640, H = 480;
  std::string detail;
  bool ok = true;
  for (int m : {5, 11}) {
    for (int d : {1, 2, 4}) {
      const MatcherBench b = bench_matcher({W, H}, m, m, d, 1);
      const std::uint64_t cols = (W - m) / d + 1, rows = (H - m) / d + 1;
      const std::uint64_t window = std::uint64_t(m) * m;
      const std::uint64_t slide = 2 * d < m ? 2ull * d * m : window;
      const std::uint64_t direct = rows * cols * window;
      const std::uint64_t incremental = rows * (window + (cols - 1) * slide);
      const bool here = b.outputs_equal && b.direct_terms == direct && b.incremental_terms == incremental;
      ok &= here;
      char buf[128];
      std::snprintf(buf, sizeof buf, "%s%dx%d/d%d %s", detail.empty() ? "" : ", ", m, m, d, here ? "ok" : "MISMATCH");
      detail += buf;
    }
  }
  return verdict(ok, detail);
}

Outcome search_window() {
  const ReacquireScenario s = standard_reacquire_scenario();
  const double gap = std::hypot(s.reappear.x - s.last.x, s.reappear.y - s.last.y);
  const ReacquireBench b = bench_reacquire(s);
  const bool ok = gap <= 20.0 && b.found_in_window && b.raster_found && 100 * b.circular_evals <= 88 * b.raster_evals;
  return verdict(ok, fmt("circular %.0f vs raster %.0f positions (%.1f%% of raster, limit 88%%), reappear gap %.1f px",
                         double(b.circular_evals), double(b.raster_evals),
                         100.0 * double(b.circular_evals) / double(b.raster_evals), gap));
}

Outcome detection_accuracy() {
  SyntheticSequence seq(moving_disc_scenario(500).script, 1);
  const RunMetrics m = replay(EngineConfig{}, seq);
  const auto& e = m.red.centroid_error;
  const bool ok = e.count == 500 && e.mean <= 1.0 && e.max <= 2.0;
  return verdict(ok, fmt("%.0f/500 clean frames scored, mean %.3f px (<= 1), max %.3f px (<= 2)", double(e.count),
                         e.mean, e.max));
}

Outcome smoothing() {
  SyntheticSequence seq(jitter_path_scenario(8.27, 300).script, 1);
  const RunMetrics m = replay(EngineConfig{}, seq);
  const double ratio = m.red.filtered_jerk / m.red.raw_jerk;

  // Spike: identical clean sequences except one detection displaced by 80 px.
  const KalmanConfig kc;
  auto run = [&](bool spike) {
    std::vector<PointD> out;
    TrackState t = TrackState::lost(kc);
    for (int i = 0; i < 120; ++i) {
      Detection d;
      d.center = {100 + 3 * i, 200 + i};
      if (spike && i == 60) d.center.y += 80;
      const StepResult r = step(t, d, 1.0 / 30, kc);
      t = r.track;
      out.push_back(*r.smoothed);
    }
    return out;
  };
  const auto clean = run(false), spiked = run(true);
  double peak = 0;
  for (std::size_t i = 0; i < clean.size(); ++i) peak = std::max(peak, distance(clean[i], spiked[i]));

  const bool ok = m.red.detections == 300 && ratio < 0.5 && peak < 40.0;
  return verdict(ok, fmt("jerk filtered/raw = %.3f (< 0.5) over %.0f detections; 80 px spike peak deflection %.2f px (< 40)",
                         ratio, double(m.red.detections), peak));
}

std::string temp_fixture(const std::string& name, const SceneScript& script, std::uint64_t seed) {
  const auto p = std::filesystem::temp_directory_path() / ("mm_accept_" + std::to_string(::getpid()) + "_" + name + ".mmfx");
  write_fixture(p.string(), SyntheticSequence(script, seed));
  return p.string();
}

std::vector<GestureKind> discrete_kinds(const RunMetrics& m) {
  std::vector<GestureKind> k;
  for (const auto& e : m.discrete_events) k.push_back(e.kind);
  return k;
}

Outcome gestures_noise_free() {
  int good = 0;
  std::string misses;
  const auto all = gesture_scenarios();
  for (const Scenario& s : all) {
    const std::string path = temp_fixture(s.name, s.script, 1);
    FixtureReader reader(path);
    const RunMetrics m = replay(EngineConfig{}, reader, s.expected);
    std::filesystem::remove(path);
    if (discrete_kinds(m) == s.expected && m.unexpected_events == 0 && m.hits_total() == m.expected_total())
      ++good;
    else
      misses += " " + s.name;
  }
  return verdict(good == static_cast<int>(all.size()) && all.size() == 8,
                 fmt("%.0f/%.0f fixtures exact", good, double(all.size())) + (misses.empty() ? "" : "; wrong:" + misses));
}

Outcome gestures_noisy() {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> ax(150, 490), ay(150, 330);
  const GestureKind kinds[] = {GestureKind::LeftClick, GestureKind::RightClick, GestureKind::DoubleClick};
  int correct = 0;
  const int n = 50;
  for (int i = 0; i < n; ++i) {
    const GestureKind k = kinds[rng() % 3];
    const Scenario s = dwell_scenario(k, {ax(rng), ay(rng)}, 4.0);
    SyntheticSequence seq(s.script, 1000 + i);
    const RunMetrics m = replay(EngineConfig{}, seq, s.expected);
    if (discrete_kinds(m) == s.expected) ++correct;
  }
  return verdict(correct * 10 >= n * 9, fmt("%.0f/%.0f correct single events (%.0f%%, need >= 90%%)", correct, n,
                                            100.0 * correct / n));
}

Outcome loss_and_reacquire() {
  const KalmanConfig kc;
  SyntheticSequence seq(velocity_ramp_scenario().script, 1);
  const RunMetrics m = replay(EngineConfig{}, seq);
  long first_blur = -1, first_clean_after = -1, lost = -1, reacquired = -1;
  bool raster = false;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const bool clean = seq.render(i).truth[0].clean;
    if (!clean && first_blur < 0) first_blur = static_cast<long>(i);
    if (clean && first_blur >= 0 && first_clean_after < 0) first_clean_after = static_cast<long>(i);
    const FrameReport& r = m.reports[i];
    if (first_blur >= 0 && lost < 0 && r.red_track.status == TrackStatus::Lost) lost = static_cast<long>(i);
    if (lost >= 0 && reacquired < 0 && r.red) {
      reacquired = static_cast<long>(i);
      raster = r.red_track.scan == ScanMode::Raster;
    }
  }
  const bool ok = first_blur >= 0 && lost >= 0 && lost - first_blur <= kc.max_misses && first_clean_after >= 0 &&
                  reacquired >= 0 && raster && reacquired - first_clean_after <= 1;
  return verdict(ok, fmt("first blurred frame %.0f, Lost at %.0f (limit +%.0f); ", double(first_blur), double(lost),
                         double(kc.max_misses)) +
                         fmt("slowdown at %.0f, raster reacquisition at %.0f (limit +1)", double(first_clean_after),
                             double(reacquired)) +
                         (raster ? "" : " [not raster]"));
}

Outcome throughput() {
  SyntheticSequence seq(moving_disc_scenario(300).script, 1);
  const RunMetrics m = replay(EngineConfig{}, seq);
  const bool ok = m.p95_elapsed <= 0.025;
  return {ok ? Outcome::Pass : Outcome::Warn,
          fmt("p50 %.2f ms, p95 %.2f ms at 640x480 stride 4 (budget 25 ms; informational)", 1e3 * m.p50_elapsed,
              1e3 * m.p95_elapsed)};
}

Outcome transport() {
  const std::string fixture = std::string(MM_FIXTURE_DIR) + "/left_click.mmfx";
  const EngineConfig cfg;
  std::vector<std::string> offline;
  {
    FixtureReader reader(fixture);
    Engine e(cfg);
    std::uint32_t id = 0;
    while (auto f = reader.next())
      for (auto& l : wire::event_lines(e.process_frame(f->frame, wire::seconds_from_us(f->t_us)), id++))
        offline.push_back(std::move(l));
  }
  ServiceOptions opts;
  opts.endpoint = {"127.0.0.1", 0};
  auto srv = serve(cfg, opts);
  const auto wire_lines = push_session(fixture, {"127.0.0.1", srv->port()});
  std::size_t same = 0;
  for (std::size_t i = 0; i < std::min(offline.size(), wire_lines.size()); ++i) same += offline[i] == wire_lines[i];
  const bool ok = !offline.empty() && wire_lines == offline;
  return verdict(ok, fmt("%.0f wire lines vs %.0f offline, %.0f identical", double(wire_lines.size()),
                         double(offline.size()), double(same)));
}

}  // namespace

int main() {
  report("A1", "incremental SSD equals direct", incremental_equivalence);
  report("A2", "operation-count model", count_model);
  report("A3", "search-window reacquisition", search_window);
  report("A4", "centroid accuracy on clean discs", detection_accuracy);
  report("A5", "Kalman smoothing and spike suppression", smoothing);
  report("A6", "gesture grammar, noise-free", gestures_noise_free);
  report("A7", "gesture grammar under noise", gestures_noisy);
  report("A8", "loss and raster reacquisition", loss_and_reacquire);
  report("A9", "frame-time budget", throughput);
  report("A10", "transport transparency", transport);
  std::printf("%s: %d failing criteria\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
