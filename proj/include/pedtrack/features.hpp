#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "pedtrack/background.hpp"
#include "pedtrack/components.hpp"
#include "pedtrack/contour.hpp"
#include "pedtrack/image.hpp"
#include "pedtrack/morphology.hpp"

namespace pedtrack {

/// Value marking a descriptor (or the pedestrian number) as not assigned.
inline constexpr double kMissing = -1.0;

/// One detected object's descriptor row. pedestrian_number stays -1 until
/// tracking assigns it.
struct FeatureRow {
  int slice_object_number = 0;
  int pedestrian_number = -1;
  int slice_number = 0;
  double cg_area_x = 0.0, cg_area_y = 0.0;  // unweighted pixel centroid
  int area = 0;
  int width = 0, height = 0;
  double perimeter = 0.0;
  double compactness = 0.0;
  double mean_r = 0.0, mean_g = 0.0, mean_b = 0.0;
  double std_r = 0.0, std_g = 0.0, std_b = 0.0;
  double skewness = 0.0, kurtosis = 0.0;          // channel-averaged
  double cg_color_x = 0.0, cg_color_y = 0.0;      // intensity-weighted centroid
};

/// Fixed descriptor order used for matching. Every row exposes the same h
/// descriptors, so votes are reproducible.
inline constexpr int kDescriptorCount = 17;

inline double descriptor(const FeatureRow& row, int k) {
  switch (k) {
    case 0: return static_cast<double>(row.area);
    case 1: return static_cast<double>(row.width);
    case 2: return static_cast<double>(row.height);
    case 3: return row.perimeter;
    case 4: return row.compactness;
    case 5: return row.cg_area_x;
    case 6: return row.cg_area_y;
    case 7: return row.mean_r;
    case 8: return row.mean_g;
    case 9: return row.mean_b;
    case 10: return row.std_r;
    case 11: return row.std_g;
    case 12: return row.std_b;
    case 13: return row.skewness;
    case 14: return row.kurtosis;
    case 15: return row.cg_color_x;
    case 16: return row.cg_color_y;
    default: throw std::out_of_range("descriptor index");
  }
}

namespace detail {

struct ChannelMoments {
  double mean = 0.0, stddev = 0.0, skewness = 0.0, kurtosis = 0.0;
};

// Population central moments; skewness and kurtosis are the standardized
// 3rd/4th moments, defined as 0 when the variance is 0.
inline ChannelMoments channel_moments(const GrayImage& plane,
                                      const std::vector<PixelCoord>& pixels) {
  const double n = static_cast<double>(pixels.size());
  double sum = 0.0;
  for (const auto& p : pixels) sum += plane.at(p.x, p.y);
  const double mean = sum / n;

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (const auto& p : pixels) {
    double d = plane.at(p.x, p.y) - mean;
    double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;

  ChannelMoments out;
  out.mean = mean;
  out.stddev = std::sqrt(m2);
  if (m2 > 0.0) {
    out.skewness = m3 / (m2 * out.stddev);
    out.kurtosis = m4 / (m2 * m2);
  }
  return out;
}

}  // namespace detail

/// Computes the descriptor row for one object against its color frame.
/// Requires the object's contour/chain code to be traced already.
inline FeatureRow compute_features(const DetectedObject& obj, const ColorImage& frame,
                                   int slice_number) {
  if (obj.pixels.empty()) throw std::invalid_argument("object has no pixels");
  for (const auto& p : obj.pixels)
    if (!frame.r.in_bounds(p.x, p.y))
      throw std::logic_error("object pixel outside frame bounds");

  FeatureRow row;
  row.slice_object_number = obj.slice_object_number;
  row.slice_number = slice_number;
  row.area = obj.area();
  row.width = obj.box_width();
  row.height = obj.box_height();
  row.perimeter = chain_perimeter(obj.chain_code);
  row.compactness =
      row.perimeter * row.perimeter / (4.0 * std::numbers::pi * static_cast<double>(row.area));

  double sx = 0.0, sy = 0.0;
  for (const auto& p : obj.pixels) {
    sx += p.x;
    sy += p.y;
  }
  row.cg_area_x = sx / static_cast<double>(row.area);
  row.cg_area_y = sy / static_cast<double>(row.area);

  auto mr = detail::channel_moments(frame.r, obj.pixels);
  auto mg = detail::channel_moments(frame.g, obj.pixels);
  auto mb = detail::channel_moments(frame.b, obj.pixels);
  row.mean_r = mr.mean;
  row.mean_g = mg.mean;
  row.mean_b = mb.mean;
  row.std_r = mr.stddev;
  row.std_g = mg.stddev;
  row.std_b = mb.stddev;
  row.skewness = (mr.skewness + mg.skewness + mb.skewness) / 3.0;
  row.kurtosis = (mr.kurtosis + mg.kurtosis + mb.kurtosis) / 3.0;

  // Color center of gravity: weight each pixel by its channel sum. An
  // all-black object falls back to the area centroid.
  double wsum = 0.0, wx = 0.0, wy = 0.0;
  for (const auto& p : obj.pixels) {
    double w = static_cast<double>(frame.r.at(p.x, p.y)) + frame.g.at(p.x, p.y) +
               frame.b.at(p.x, p.y);
    wsum += w;
    wx += w * p.x;
    wy += w * p.y;
  }
  if (wsum > 0.0) {
    row.cg_color_x = wx / wsum;
    row.cg_color_y = wy / wsum;
  } else {
    row.cg_color_x = row.cg_area_x;
    row.cg_color_y = row.cg_area_y;
  }
  return row;
}

/// Detection thresholds for one frame.
struct DetectParams {
  int theta = 15;          // background subtraction threshold, gray levels
  int area_threshold = 30; // minimum object area, pixels
  int morph_radius = 1;    // structuring element half-width
};

struct FrameDetection {
  BinaryMask mask;                     // after morphology
  std::vector<DetectedObject> objects; // area-filtered, contours traced
  std::vector<FeatureRow> rows;
};

inline FrameDetection detect_frame(const ColorImage& frame, const ColorImage& background,
                                   const DetectParams& params, int slice_number) {
  FrameDetection out;
  auto sub = subtract_background(frame, background, params.theta);
  out.mask = morph_close_open(sub.mask, params.morph_radius);
  out.objects = filter_by_area(label_components(out.mask), params.area_threshold);
  out.rows.reserve(out.objects.size());
  for (auto& obj : out.objects) {
    auto trace = trace_contour(obj);
    obj.contour = std::move(trace.contour);
    obj.chain_code = std::move(trace.chain_code);
    out.rows.push_back(compute_features(obj, frame, slice_number));
  }
  return out;
}

/// Runs subtraction, morphology, labeling, filtering and feature extraction
/// over every frame. Rows come out ordered by (slice_number,
/// slice_object_number).
inline std::vector<FeatureRow> build_descriptor_database(const ImageStack& stack,
                                                         const ColorImage& background,
                                                         const DetectParams& params) {
  std::vector<FeatureRow> rows;
  for (int i = 0; i < stack.frame_count(); ++i) {
    auto det = detect_frame(stack.frames[i], background, params, i + 1);
    rows.insert(rows.end(), det.rows.begin(), det.rows.end());
  }
  return rows;
}

}  // namespace pedtrack
