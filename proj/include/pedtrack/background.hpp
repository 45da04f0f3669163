#pragma once

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "pedtrack/image.hpp"
#include "pedtrack/util.hpp"

namespace pedtrack {

/// Per-pixel, per-channel median across all frames. Even counts take the
/// lower median, so the result is always an observed gray level.
inline ColorImage median_background(const ImageStack& stack) {
  if (stack.frames.empty()) throw InputError("empty stack");
  const int w = stack.frames[0].width();
  const int h = stack.frames[0].height();
  const std::size_t n = stack.frames.size();
  const std::size_t mid = (n - 1) / 2;

  ColorImage bg(w, h);
  std::vector<std::uint8_t> samples(n);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < bg.r.pixel_count(); ++i) {
      for (std::size_t f = 0; f < n; ++f) samples[f] = stack.frames[f].channel(c).data[i];
      std::nth_element(samples.begin(), samples.begin() + mid, samples.end());
      bg.channel(c).data[i] = samples[mid];
    }
  }
  return bg;
}

struct GraySubtraction {
  GrayImage object_image;
  BinaryMask mask;
};

/// A pixel stays background when its intensity is within theta of the
/// background; otherwise it keeps its value and is marked foreground.
inline GraySubtraction subtract_background(const GrayImage& frame, const GrayImage& background,
                                           int theta) {
  if (frame.width != background.width || frame.height != background.height)
    throw InputError("frame/background dimension mismatch");
  if (theta < 0 || theta > 255) throw InputError("theta must be in [0, 255]");

  GraySubtraction out{GrayImage(frame.width, frame.height), BinaryMask(frame.width, frame.height)};
  for (std::size_t i = 0; i < frame.data.size(); ++i) {
    int diff = std::abs(static_cast<int>(frame.data[i]) - static_cast<int>(background.data[i]));
    if (diff < theta) continue;
    out.object_image.data[i] = frame.data[i];
    out.mask.data[i] = 1;
  }
  return out;
}

struct ColorSubtraction {
  ColorImage object_image;
  BinaryMask mask;
};

/// Color rule: a pixel is foreground when the threshold test fires on any of
/// the three channels. Foreground pixels keep their full color.
inline ColorSubtraction subtract_background(const ColorImage& frame, const ColorImage& background,
                                            int theta) {
  if (!frame.same_size(background)) throw InputError("frame/background dimension mismatch");
  if (theta < 0 || theta > 255) throw InputError("theta must be in [0, 255]");

  ColorSubtraction out{ColorImage(frame.width(), frame.height()),
                       BinaryMask(frame.width(), frame.height())};
  for (std::size_t i = 0; i < frame.r.pixel_count(); ++i) {
    bool fg = false;
    for (int c = 0; c < 3; ++c) {
      int diff = std::abs(static_cast<int>(frame.channel(c).data[i]) -
                          static_cast<int>(background.channel(c).data[i]));
      if (diff >= theta) {
        fg = true;
        break;
      }
    }
    if (!fg) continue;
    out.mask.data[i] = 1;
    for (int c = 0; c < 3; ++c) out.object_image.channel(c).data[i] = frame.channel(c).data[i];
  }
  return out;
}

}  // namespace pedtrack
