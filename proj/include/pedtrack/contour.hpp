#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "pedtrack/components.hpp"
#include "pedtrack/geometry.hpp"

namespace pedtrack {

// Chain code directions, clockwise from east with y growing downward:
// 0=E 1=SE 2=S 3=SW 4=W 5=NW 6=N 7=NE.
inline constexpr int kChainDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
inline constexpr int kChainDy[8] = {0, 1, 1, 1, 0, -1, -1, -1};

inline int chain_direction(const PixelCoord& from, const PixelCoord& to) {
  for (int d = 0; d < 8; ++d)
    if (from.x + kChainDx[d] == to.x && from.y + kChainDy[d] == to.y) return d;
  return -1;
}

/// Axis steps count 1, diagonal steps sqrt(2).
inline double chain_perimeter(const std::vector<std::uint8_t>& chain_code) {
  double p = 0.0;
  for (auto c : chain_code) p += (c % 2 == 0) ? 1.0 : std::sqrt(2.0);
  return p;
}

struct ContourTrace {
  std::vector<PixelCoord> contour;      // closed boundary walk, start not repeated
  std::vector<std::uint8_t> chain_code;  // one code per walk step, including the closing step
};

namespace detail {

// Membership bitmap over the object's bounding box.
class ObjectGrid {
 public:
  explicit ObjectGrid(const DetectedObject& obj)
      : min_x_(obj.min_x),
        min_y_(obj.min_y),
        w_(obj.box_width()),
        h_(obj.box_height()),
        cells_(static_cast<std::size_t>(w_) * h_, 0) {
    for (const auto& p : obj.pixels)
      cells_[static_cast<std::size_t>(p.y - min_y_) * w_ + (p.x - min_x_)] = 1;
  }

  bool contains(int x, int y) const {
    int lx = x - min_x_, ly = y - min_y_;
    if (lx < 0 || lx >= w_ || ly < 0 || ly >= h_) return false;
    return cells_[static_cast<std::size_t>(ly) * w_ + lx] != 0;
  }

 private:
  int min_x_, min_y_, w_, h_;
  std::vector<std::uint8_t> cells_;
};

}  // namespace detail

/// Moore boundary following over the object's own pixels. Returns the outer
/// boundary as a closed walk plus its chain code; a single pixel yields a
/// one-point contour and an empty chain code.
inline ContourTrace trace_contour(const DetectedObject& obj) {
  ContourTrace out;
  if (obj.pixels.empty()) return out;

  detail::ObjectGrid grid(obj);
  const PixelCoord start = obj.pixels.front();  // topmost-leftmost pixel

  // Scans the 8-neighborhood of `cur` clockwise, starting just past the
  // backtrack direction. Returns the first object pixel, updating the
  // backtrack to the last background position examined before it.
  auto next_boundary = [&](const PixelCoord& cur, int& backtrack_dir) -> std::optional<PixelCoord> {
    for (int i = 1; i <= 8; ++i) {
      int d = (backtrack_dir + i) % 8;
      PixelCoord cand{cur.x + kChainDx[d], cur.y + kChainDy[d]};
      if (grid.contains(cand.x, cand.y)) {
        backtrack_dir = (d + 7) % 8;  // position examined just before the hit
        return cand;
      }
    }
    return std::nullopt;
  };

  // `start` is the first raster pixel, so its west neighbor is outside.
  int backtrack = 4;
  std::optional<PixelCoord> first_target;

  PixelCoord cur = start;
  out.contour.push_back(start);
  while (true) {
    int scan_backtrack = backtrack;
    auto next = next_boundary(cur, scan_backtrack);
    if (!next) break;  // isolated single pixel

    if (first_target && cur == start && *next == *first_target) break;  // loop closed

    int dir = chain_direction(cur, *next);
    out.chain_code.push_back(static_cast<std::uint8_t>(dir));
    if (!first_target) first_target = *next;

    // Backtrack for the new pixel points at the last background neighbor,
    // re-expressed relative to `next`.
    PixelCoord back_pos{cur.x + kChainDx[scan_backtrack], cur.y + kChainDy[scan_backtrack]};
    backtrack = chain_direction(*next, back_pos);
    cur = *next;
    out.contour.push_back(cur);
  }

  if (out.contour.size() > 1 && out.contour.back() == start) out.contour.pop_back();
  return out;
}

}  // namespace pedtrack
