#pragma once

#include <cctype>
#include <fstream>
#include <istream>
#include <string>
#include <vector>

#include "pedtrack/image.hpp"
#include "pedtrack/util.hpp"

namespace pedtrack {

namespace detail {

inline int pnm_read_int(std::istream& in, const std::string& path) {
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (!std::isspace(static_cast<unsigned char>(c))) break;
  }
  if (c == EOF) throw InputError(path + ": truncated header");
  if (!std::isdigit(static_cast<unsigned char>(c)))
    throw InputError(path + ": malformed header");
  long value = 0;
  while (c != EOF && std::isdigit(static_cast<unsigned char>(c))) {
    value = value * 10 + (c - '0');
    if (value > 1'000'000'000L) throw InputError(path + ": header value out of range");
    c = in.get();
  }
  // The byte after the last digit is the separator; after maxval it is the
  // single whitespace that precedes the pixel data.
  return static_cast<int>(value);
}

}  // namespace detail

/// Reads a binary PGM (P5) or PPM (P6) with maxval 255. Grayscale input is
/// replicated to three identical planes.
inline ColorImage read_image(std::istream& in, const std::string& path) {
  char m0 = 0, m1 = 0;
  in.get(m0);
  in.get(m1);
  if (!in || m0 != 'P' || (m1 != '5' && m1 != '6'))
    throw InputError(path + ": not a binary PGM/PPM (expected P5 or P6 magic)");
  const bool color = m1 == '6';

  int width = detail::pnm_read_int(in, path);
  int height = detail::pnm_read_int(in, path);
  int maxval = detail::pnm_read_int(in, path);
  if (width <= 0 || height <= 0) throw InputError(path + ": bad dimensions");
  if (maxval != 255) throw InputError(path + ": unsupported maxval (only 255)");

  const std::size_t pixels = static_cast<std::size_t>(width) * height;
  std::vector<char> raw(pixels * (color ? 3 : 1));
  in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size())
    throw InputError(path + ": truncated pixel data");

  ColorImage img(width, height);
  if (color) {
    for (std::size_t i = 0; i < pixels; ++i) {
      img.r.data[i] = static_cast<std::uint8_t>(raw[3 * i]);
      img.g.data[i] = static_cast<std::uint8_t>(raw[3 * i + 1]);
      img.b.data[i] = static_cast<std::uint8_t>(raw[3 * i + 2]);
    }
  } else {
    for (std::size_t i = 0; i < pixels; ++i) {
      auto v = static_cast<std::uint8_t>(raw[i]);
      img.r.data[i] = v;
      img.g.data[i] = v;
      img.b.data[i] = v;
    }
  }
  return img;
}

inline ColorImage read_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open");
  return read_image(in, path);
}

inline void write_ppm(const std::string& path, const ColorImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path + ": cannot open for writing");
  out << "P6\n" << img.width() << " " << img.height() << "\n255\n";
  const std::size_t pixels = img.r.pixel_count();
  std::vector<char> raw(pixels * 3);
  for (std::size_t i = 0; i < pixels; ++i) {
    raw[3 * i] = static_cast<char>(img.r.data[i]);
    raw[3 * i + 1] = static_cast<char>(img.g.data[i]);
    raw[3 * i + 2] = static_cast<char>(img.b.data[i]);
  }
  out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
  if (!out) throw std::runtime_error(path + ": write failed");
}

inline void write_pgm(const std::string& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path + ": cannot open for writing");
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
  if (!out) throw std::runtime_error(path + ": write failed");
}

/// Debug export: 0 = background, 255 = foreground.
inline void write_mask_pgm(const std::string& path, const BinaryMask& mask) {
  GrayImage img(mask.width, mask.height);
  for (std::size_t i = 0; i < mask.data.size(); ++i) img.data[i] = mask.data[i] ? 255 : 0;
  write_pgm(path, img);
}

/// Loads an ordered file list into a stack. All frames must share dimensions.
inline ImageStack load_image_sequence(const std::vector<std::string>& paths,
                                      double frame_interval_seconds) {
  if (paths.empty()) throw InputError("empty sequence");
  if (frame_interval_seconds <= 0.0) throw InputError("frame interval must be positive");
  ImageStack stack;
  stack.frame_interval_seconds = frame_interval_seconds;
  stack.frames.reserve(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    ColorImage img = read_image(paths[i]);
    if (!stack.frames.empty() && !img.same_size(stack.frames[0])) {
      throw InputError("frame " + std::to_string(i + 1) + " (" + paths[i] +
                       "): dimension mismatch");
    }
    stack.frames.push_back(std::move(img));
  }
  return stack;
}

}  // namespace pedtrack
