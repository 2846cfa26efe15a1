#include "mm/harness/bench.hpp"

#include <chrono>
#include <random>

#include "mm/errors.hpp"
#include "mm/harness/synth.hpp"

namespace mm::harness {

using json = nlohmann::ordered_json;

namespace {

HsFrame random_hs(Size s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> hue(0, kHueFull - 1);
  std::uniform_int_distribution<int> sat(0, kSatMax);
  HsFrame f(s.width, s.height);
  for (int y = 0; y < s.height; ++y) {
    auto* h = f.hue_row(y);
    auto* t = f.sat_row(y);
    for (int x = 0; x < s.width; ++x) {
      h[x] = static_cast<std::uint16_t>(hue(rng));
      t[x] = static_cast<std::uint16_t>(sat(rng));
    }
  }
  return f;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

HsFrame render_hs(const ReacquireScenario& s, bool with_marker) {
  RgbFrame f(s.frame.width, s.frame.height);
  f.fill(128, 128, 128);
  if (with_marker) paint_disc(f, to_double(s.reappear), s.radius, marker_rgb(s.tpl.color));
  return rgb_to_hs(f);
}

}  // namespace

MatcherBench bench_matcher(Size frame, int mask_width, int mask_height, int stride, int repetitions,
                           std::uint64_t seed) {
  MarkerTemplate tpl;
  tpl.mask_width = mask_width;
  tpl.mask_height = mask_height;
  tpl.ref_hue = 0;
  tpl.ref_sat = kSatMax;
  tpl.validate();
  if (stride < 1) throw ParameterError("stride must be >= 1");
  if (frame.width < mask_width || frame.height < mask_height) throw ParameterError("mask larger than frame");
  if (repetitions < 1) throw ParameterError("repetitions must be >= 1");

  const HsFrame hs = random_hs(frame, seed);
  MatcherBench b{frame, mask_width, mask_height, stride, repetitions};

  const int cols = (frame.width - mask_width) / stride + 1;
  const int rows = (frame.height - mask_height) / stride + 1;
  const std::uint64_t cells = static_cast<std::uint64_t>(mask_width) * mask_height;
  b.model_direct_terms = static_cast<std::uint64_t>(rows) * cols * cells;
  const std::uint64_t step_terms =
      incremental_pays(stride, mask_width) ? 2ull * stride * mask_height : cells;
  b.model_incremental_terms = static_cast<std::uint64_t>(rows) * (cells + (cols - 1) * step_terms);

  std::vector<ResponseValue> direct_out;
  std::vector<ResponseValue> incr_out;
  direct_out.reserve(static_cast<std::size_t>(rows) * cols);
  incr_out.reserve(static_cast<std::size_t>(rows) * cols);

  b.outputs_equal = true;
  for (int rep = 0; rep < repetitions; ++rep) {
    OpCounter dc;
    OpCounter ic;
    direct_out.clear();
    incr_out.clear();

    auto t0 = std::chrono::steady_clock::now();
    for (int y = tpl.half_h(); y < frame.height - tpl.half_h(); y += stride)
      for (int x = tpl.half_w(); x < frame.width - tpl.half_w(); x += stride)
        direct_out.push_back(response_direct(hs, tpl, {x, y}, &dc));
    b.direct_seconds += seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    for (int y = tpl.half_h(); y < frame.height - tpl.half_h(); y += stride)
      for (const RowResponse& r : response_row(hs, tpl, y, stride, &ic)) incr_out.push_back(r.value);
    b.incremental_seconds += seconds_since(t0);

    b.outputs_equal = b.outputs_equal && direct_out == incr_out;
    b.positions = dc.positions;
    b.direct_terms = dc.terms;
    b.incremental_terms = ic.terms;
  }
  return b;
}

ReacquireScenario standard_reacquire_scenario() {
  ReacquireScenario s;
  s.detector.search_window_half = 48;
  s.detector.stride = 4;
  return s;
}

ReacquireBench bench_reacquire(const ReacquireScenario& s) {
  s.tpl.validate();
  s.detector.validate();
  ReacquireBench b;

  const HsFrame hidden = render_hs(s, false);
  const HsFrame reveal = render_hs(s, true);

  {
    OpCounter c;
    (void)detect(hidden, s.tpl, s.detector, std::nullopt, c);
    b.hidden_raster_evals = c.positions;
  }
  {
    OpCounter c;
    (void)detect(hidden, s.tpl, s.detector, s.last, c);
    b.hidden_circular_evals = c.positions;
  }

  OpCounter raster;
  b.raster_found = detect(reveal, s.tpl, s.detector, std::nullopt, raster).has_value();
  b.raster_evals = raster.positions;

  OpCounter circ;
  b.found_in_window = detect(reveal, s.tpl, s.detector, s.last, circ).has_value();
  b.circular_found = b.found_in_window;
  if (!b.found_in_window) {
    // Window exhausted: the marker is declared lost and the next frame is raster scanned.
    b.circular_found = detect(reveal, s.tpl, s.detector, std::nullopt, circ).has_value();
  }
  b.circular_evals = circ.positions;
  if (b.raster_evals > 0)
    b.reduction_pct = 100.0 * (1.0 - static_cast<double>(b.circular_evals) / static_cast<double>(b.raster_evals));
  return b;
}

json to_json(const MatcherBench& b) {
  return {{"suite", "matcher"},
          {"width", b.frame.width},
          {"height", b.frame.height},
          {"mask_width", b.mask_width},
          {"mask_height", b.mask_height},
          {"stride", b.stride},
          {"repetitions", b.repetitions},
          {"positions", b.positions},
          {"direct_terms", b.direct_terms},
          {"incremental_terms", b.incremental_terms},
          {"model_direct_terms", b.model_direct_terms},
          {"model_incremental_terms", b.model_incremental_terms},
          {"direct_seconds", b.direct_seconds},
          {"incremental_seconds", b.incremental_seconds},
          {"outputs_equal", b.outputs_equal}};
}

json to_json(const ReacquireBench& b) {
  return {{"suite", "reacquire"},
          {"raster_evals", b.raster_evals},
          {"circular_evals", b.circular_evals},
          {"hidden_raster_evals", b.hidden_raster_evals},
          {"hidden_circular_evals", b.hidden_circular_evals},
          {"found_in_window", b.found_in_window},
          {"raster_found", b.raster_found},
          {"circular_found", b.circular_found},
          {"reduction_pct", b.reduction_pct}};
}

}  // namespace mm::harness
