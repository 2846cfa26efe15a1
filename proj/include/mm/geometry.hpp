#pragma once

#include <cmath>
#include <compare>

namespace mm {

struct PointI {
  int x = 0;
  int y = 0;
  friend bool operator==(const PointI&, const PointI&) = default;
};

struct PointD {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const PointD&, const PointD&) = default;
};

struct Size {
  int width = 0;
  int height = 0;
  friend bool operator==(const Size&, const Size&) = default;
};

inline double distance(PointD a, PointD b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline PointD to_double(PointI p) {
  return {static_cast<double>(p.x), static_cast<double>(p.y)};
}

}  // namespace mm
