#pragma once

// Window-scanning reference for the morphology operators, kept independent
// of the library implementation. Out-of-image positions are background.

#include "pedtrack/image.hpp"

namespace testoracle {

inline pedtrack::BinaryMask ref_dilate(const pedtrack::BinaryMask& m, int r) {
  pedtrack::BinaryMask out(m.width, m.height);
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      bool any = false;
      for (int dy = -r; dy <= r && !any; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
          int xx = x + dx, yy = y + dy;
          if (m.in_bounds(xx, yy) && m.at(xx, yy)) {
            any = true;
            break;
          }
        }
      out.at(x, y) = any ? 1 : 0;
    }
  }
  return out;
}

inline pedtrack::BinaryMask ref_erode(const pedtrack::BinaryMask& m, int r) {
  pedtrack::BinaryMask out(m.width, m.height);
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      bool all = true;
      for (int dy = -r; dy <= r && all; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
          int xx = x + dx, yy = y + dy;
          if (!m.in_bounds(xx, yy) || !m.at(xx, yy)) {
            all = false;
            break;
          }
        }
      out.at(x, y) = all ? 1 : 0;
    }
  }
  return out;
}

inline pedtrack::BinaryMask ref_close_open(const pedtrack::BinaryMask& m, int r) {
  auto closed = ref_erode(ref_dilate(m, r), r);
  return ref_dilate(ref_erode(closed, r), r);
}

}  // namespace testoracle
