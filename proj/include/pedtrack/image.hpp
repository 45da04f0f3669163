#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pedtrack/util.hpp"

namespace pedtrack {

/// Single-channel 8-bit image, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {
    if (w <= 0 || h <= 0) throw std::invalid_argument("image dimensions must be positive");
  }

  std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
  std::size_t pixel_count() const { return data.size(); }
};

/// Three gray planes of equal size.
struct ColorImage {
  GrayImage r, g, b;

  ColorImage() = default;
  ColorImage(int w, int h) : r(w, h), g(w, h), b(w, h) {}

  int width() const { return r.width; }
  int height() const { return r.height; }

  const GrayImage& channel(int c) const { return c == 0 ? r : (c == 1 ? g : b); }
  GrayImage& channel(int c) { return c == 0 ? r : (c == 1 ? g : b); }

  bool same_size(const ColorImage& o) const {
    return width() == o.width() && height() == o.height();
  }
};

/// Foreground/background grid. 1 = foreground.
struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  BinaryMask() = default;
  BinaryMask(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {
    if (w <= 0 || h <= 0) throw std::invalid_argument("mask dimensions must be positive");
  }

  std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

  std::size_t foreground_count() const {
    std::size_t n = 0;
    for (auto v : data) n += v ? 1 : 0;
    return n;
  }
};

/// Ordered frame sequence; frame i holds slice number i+1.
struct ImageStack {
  std::vector<ColorImage> frames;
  double frame_interval_seconds = 1.0;

  int frame_count() const { return static_cast<int>(frames.size()); }

  void validate() const {
    if (frame_interval_seconds <= 0.0) throw InputError("frame interval must be positive");
    for (std::size_t i = 1; i < frames.size(); ++i) {
      if (!frames[i].same_size(frames[0]))
        throw InputError("frame " + std::to_string(i + 1) + ": dimension mismatch");
    }
  }
};

}  // namespace pedtrack
