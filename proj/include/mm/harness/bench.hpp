#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "mm/detector.hpp"
#include "mm/geometry.hpp"
#include "mm/matcher.hpp"

namespace mm::harness {

struct MatcherBench {
  Size frame;
  int mask_width = 0;
  int mask_height = 0;
  int stride = 1;
  int repetitions = 1;
  std::uint64_t positions = 0;          // per repetition
  std::uint64_t direct_terms = 0;       // measured, per repetition
  std::uint64_t incremental_terms = 0;  // measured, per repetition
  std::uint64_t model_direct_terms = 0;
  std::uint64_t model_incremental_terms = 0;
  double direct_seconds = 0.0;       // total over repetitions
  double incremental_seconds = 0.0;  // total over repetitions
  bool outputs_equal = false;
};

/// Evaluates every stride-spaced position of a random frame (rows and
/// columns both stepped by `stride`) with repeated direct SSD and with
/// row-wise sliding, checking the two agree exactly.
MatcherBench bench_matcher(Size frame, int mask_width, int mask_height, int stride, int repetitions,
                           std::uint64_t seed = 1);

struct ReacquireScenario {
  Size frame{640, 480};
  PointI last{320, 240};      // where the marker was last seen
  PointI reappear{332, 256};  // where it shows up again
  double radius = 12.0;
  MarkerTemplate tpl = MarkerTemplate::red();
  DetectorConfig detector;
};

/// Marker hidden for one frame, reappearing 20 px from its last position,
/// search_window_half = 48 and stride = 4.
ReacquireScenario standard_reacquire_scenario();

struct ReacquireBench {
  std::uint64_t raster_evals = 0;    // raster scan of the reveal frame until detection
  std::uint64_t circular_evals = 0;  // circular scan, plus a raster pass on the next frame if it misses
  std::uint64_t hidden_raster_evals = 0;    // informational: empty frame, full raster
  std::uint64_t hidden_circular_evals = 0;  // informational: empty frame, exhausted window
  bool found_in_window = false;
  bool raster_found = false;
  bool circular_found = false;
  double reduction_pct = 0.0;  // 100 * (1 - circular / raster)
};

ReacquireBench bench_reacquire(const ReacquireScenario& s);

nlohmann::ordered_json to_json(const MatcherBench& b);
nlohmann::ordered_json to_json(const ReacquireBench& b);

}  // namespace mm::harness
