#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>

#include "mm/color.hpp"
#include "mm/geometry.hpp"
#include "mm/matcher.hpp"

namespace mm {

struct DetectorConfig {
  int stride = 4;                                   // evaluate every stride-th pixel
  std::uint64_t response_threshold = 49'000'000;    // seed requires response < this
  int area_min = 150;                               // size gate: area_min < area < area_max
  int area_max = 1600;
  int search_window_half = 48;                      // circular scan half-extent
  std::uint64_t region_color_tol = 4'000'000;       // per-pixel distance bound when growing

  void validate(std::string_view path = "detector") const;

  friend bool operator==(const DetectorConfig&, const DetectorConfig&) = default;
};

/// Response threshold at which a mask window whose `fraction` of pixels lie
/// beyond `color_tol` from the reference can no longer pass.
std::uint64_t contamination_threshold(const MarkerTemplate& tpl, std::uint64_t color_tol, double fraction);

struct Detection {
  PointI center;  // centre of mass, rounded
  int area = 0;
  ResponseValue response;
  std::uint64_t frame_index = 0;
  friend bool operator==(const Detection&, const Detection&) = default;
};

struct Region {
  int area = 0;
  PointD centroid;
};

/// Called for each candidate seed (response below threshold) in scan order.
/// Return true to stop scanning.
using SeedVisitor = std::function<bool(PointI seed, ResponseValue rv)>;

/// Row-major stride-order scan over the whole frame.
void raster_scan_each(const HsFrame& frame, const MarkerTemplate& tpl, const DetectorConfig& cfg,
                      OpCounter& counter, const SeedVisitor& visit);

/// Expanding square rings of stride-spaced positions around `prev_center`,
/// confined to the search window.
void circular_scan_each(const HsFrame& frame, const MarkerTemplate& tpl, const DetectorConfig& cfg,
                        PointI prev_center, OpCounter& counter, const SeedVisitor& visit);

std::optional<PointI> raster_scan(const HsFrame& frame, const MarkerTemplate& tpl, const DetectorConfig& cfg,
                                  OpCounter& counter);

/// Throws BoundsError if `prev_center` lies outside the frame.
std::optional<PointI> circular_scan(const HsFrame& frame, const MarkerTemplate& tpl, const DetectorConfig& cfg,
                                    PointI prev_center, OpCounter& counter);

/// 4-connected flood fill from `seed` over pixels within region_color_tol of
/// the reference, stopping once area_max + 1 pixels have been collected.
/// A seed outside the tolerance yields area 0.
Region grow_region(const HsFrame& frame, const MarkerTemplate& tpl, PointI seed, const DetectorConfig& cfg);

/// Scan (circular around `prev` when given, raster otherwise), grow, apply the
/// size gate, and return the first region that passes.
std::optional<Detection> detect(const HsFrame& frame, const MarkerTemplate& tpl, const DetectorConfig& cfg,
                                std::optional<PointI> prev, OpCounter& counter, std::uint64_t frame_index = 0);

}  // namespace mm
