#pragma once

#include "pedtrack/image.hpp"
#include "pedtrack/util.hpp"

namespace pedtrack {

// Square structuring element of half-width `radius`. Pixels outside the
// image are background for both operations.

inline BinaryMask dilate(const BinaryMask& mask, int radius) {
  if (radius < 0) throw InputError("morphology radius must be >= 0");
  if (radius == 0) return mask;
  BinaryMask out(mask.width, mask.height);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(x, y)) continue;
      int y0 = std::max(0, y - radius), y1 = std::min(mask.height - 1, y + radius);
      int x0 = std::max(0, x - radius), x1 = std::min(mask.width - 1, x + radius);
      for (int yy = y0; yy <= y1; ++yy)
        for (int xx = x0; xx <= x1; ++xx) out.at(xx, yy) = 1;
    }
  }
  return out;
}

inline BinaryMask erode(const BinaryMask& mask, int radius) {
  if (radius < 0) throw InputError("morphology radius must be >= 0");
  if (radius == 0) return mask;
  BinaryMask out(mask.width, mask.height);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(x, y)) continue;
      // A window that hangs over the image border always sees background.
      if (x - radius < 0 || x + radius >= mask.width || y - radius < 0 ||
          y + radius >= mask.height)
        continue;
      bool all = true;
      for (int yy = y - radius; all && yy <= y + radius; ++yy)
        for (int xx = x - radius; xx <= x + radius; ++xx)
          if (!mask.at(xx, yy)) {
            all = false;
            break;
          }
      if (all) out.at(x, y) = 1;
    }
  }
  return out;
}

inline BinaryMask morph_close(const BinaryMask& mask, int radius) {
  return erode(dilate(mask, radius), radius);
}

inline BinaryMask morph_open(const BinaryMask& mask, int radius) {
  return dilate(erode(mask, radius), radius);
}

/// Closing (fills small gaps) followed by opening (drops small specks).
/// Radius 0 is the identity.
inline BinaryMask morph_close_open(const BinaryMask& mask, int radius) {
  if (radius == 0) return mask;
  return morph_open(morph_close(mask, radius), radius);
}

}  // namespace pedtrack
