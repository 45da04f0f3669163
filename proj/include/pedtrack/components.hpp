#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "pedtrack/geometry.hpp"
#include "pedtrack/image.hpp"

namespace pedtrack {

/// One 8-connected foreground region. Contour and chain code are filled by
/// trace_contour; label_components leaves them empty.
struct DetectedObject {
  int slice_object_number = 0;
  int min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  std::vector<PixelCoord> pixels;  // raster order
  std::vector<PixelCoord> contour;
  std::vector<std::uint8_t> chain_code;

  int area() const { return static_cast<int>(pixels.size()); }
  int box_width() const { return max_x - min_x + 1; }
  int box_height() const { return max_y - min_y + 1; }
};

/// Finds maximal 8-connected foreground regions. Objects are numbered 1..m
/// in order of their first pixel in a top-left to bottom-right scan.
inline std::vector<DetectedObject> label_components(const BinaryMask& mask) {
  static constexpr int dx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
  static constexpr int dy[8] = {0, 1, 1, 1, 0, -1, -1, -1};

  std::vector<std::uint8_t> visited(mask.data.size(), 0);
  std::vector<DetectedObject> objects;
  std::vector<PixelCoord> queue;

  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      std::size_t idx = static_cast<std::size_t>(y) * mask.width + x;
      if (!mask.data[idx] || visited[idx]) continue;

      DetectedObject obj;
      obj.slice_object_number = static_cast<int>(objects.size()) + 1;
      obj.min_x = obj.max_x = x;
      obj.min_y = obj.max_y = y;

      queue.clear();
      queue.push_back({x, y});
      visited[idx] = 1;
      while (!queue.empty()) {
        PixelCoord p = queue.back();
        queue.pop_back();
        obj.pixels.push_back(p);
        obj.min_x = std::min(obj.min_x, p.x);
        obj.max_x = std::max(obj.max_x, p.x);
        obj.min_y = std::min(obj.min_y, p.y);
        obj.max_y = std::max(obj.max_y, p.y);
        for (int d = 0; d < 8; ++d) {
          int nx = p.x + dx[d], ny = p.y + dy[d];
          if (!mask.in_bounds(nx, ny)) continue;
          std::size_t nidx = static_cast<std::size_t>(ny) * mask.width + nx;
          if (!mask.data[nidx] || visited[nidx]) continue;
          visited[nidx] = 1;
          queue.push_back({nx, ny});
        }
      }
      std::sort(obj.pixels.begin(), obj.pixels.end(), raster_less);
      objects.push_back(std::move(obj));
    }
  }
  return objects;
}

/// Drops objects below the area threshold and renumbers survivors 1..k,
/// preserving order.
inline std::vector<DetectedObject> filter_by_area(std::vector<DetectedObject> objects,
                                                  int area_threshold) {
  std::vector<DetectedObject> kept;
  kept.reserve(objects.size());
  for (auto& obj : objects) {
    if (obj.area() < area_threshold) continue;
    obj.slice_object_number = static_cast<int>(kept.size()) + 1;
    kept.push_back(std::move(obj));
  }
  return kept;
}

}  // namespace pedtrack
