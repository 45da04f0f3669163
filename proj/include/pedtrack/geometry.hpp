#pragma once

#include <cmath>

namespace pedtrack {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

  double norm() const { return std::hypot(x, y); }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

// Integer pixel position; x is the column, y the row, y grows downward.
struct PixelCoord {
  int x = 0;
  int y = 0;

  bool operator==(const PixelCoord& o) const { return x == o.x && y == o.y; }
  bool operator!=(const PixelCoord& o) const { return !(*this == o); }
};

// Top-left to bottom-right scan order.
inline bool raster_less(const PixelCoord& a, const PixelCoord& b) {
  return a.y != b.y ? a.y < b.y : a.x < b.x;
}

// Axis-aligned rectangle; membership is inclusive of the boundary.
struct Rect {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
  bool contains(double x, double y) const {
    return x >= min_x && x <= max_x && y >= min_y && y <= max_y;
  }
};

}  // namespace pedtrack
