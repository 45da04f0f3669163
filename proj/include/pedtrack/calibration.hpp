#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "pedtrack/geometry.hpp"
#include "pedtrack/tracing.hpp"
#include "pedtrack/util.hpp"

namespace pedtrack {

/// Affine image-to-world transform:
///   X_world = u + v * x_image + w * y_image
///   Y_world = x0 + y0 * x_image + z0 * y_image
struct Calibration {
  double u = 0.0, v = 1.0, w = 0.0;
  double x0 = 0.0, y0 = 0.0, z0 = 1.0;
  double fit_residual = 0.0;  // RMS point error in world units

  Vec2 apply(double image_x, double image_y) const {
    return {u + v * image_x + w * image_y, x0 + y0 * image_x + z0 * image_y};
  }
};

struct ControlPoint {
  double image_x = 0.0, image_y = 0.0;
  double world_x = 0.0, world_y = 0.0;
};

namespace detail {

// Solves the 3x3 system a * x = b with partial pivoting. Returns false when
// the matrix is numerically singular.
inline bool solve3(std::array<std::array<double, 3>, 3> a, std::array<double, 3> b,
                   std::array<double, 3>& x) {
  double scale = 0.0;
  for (const auto& row : a)
    for (double v : row) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return false;

  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (std::abs(a[pivot][col]) < 1e-12 * scale) return false;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (int r = col + 1; r < 3; ++r) {
      double f = a[r][col] / a[col][col];
      for (int c = col; c < 3; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (int r = 2; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < 3; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return true;
}

}  // namespace detail

/// Least-squares fit of the two independent coordinate regressions via
/// normal equations. Needs at least 3 control points that are not collinear
/// in image coordinates.
inline Calibration fit_calibration(const std::vector<ControlPoint>& points) {
  if (points.size() < 3) throw InputError("calibration needs at least 3 control points");

  // Normal equations for the design [1, xi, yi]; shared by both regressions.
  std::array<std::array<double, 3>, 3> ata{};
  std::array<double, 3> atx{}, aty{};
  for (const auto& p : points) {
    const double row[3] = {1.0, p.image_x, p.image_y};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) ata[i][j] += row[i] * row[j];
      atx[i] += row[i] * p.world_x;
      aty[i] += row[i] * p.world_y;
    }
  }

  std::array<double, 3> cx{}, cy{};
  if (!detail::solve3(ata, atx, cx) || !detail::solve3(ata, aty, cy))
    throw InputError("calibration control points are collinear (rank-deficient fit)");

  Calibration cal;
  cal.u = cx[0];
  cal.v = cx[1];
  cal.w = cx[2];
  cal.x0 = cy[0];
  cal.y0 = cy[1];
  cal.z0 = cy[2];

  double sq = 0.0;
  for (const auto& p : points) {
    Vec2 mapped = cal.apply(p.image_x, p.image_y);
    double dx = mapped.x - p.world_x;
    double dy = mapped.y - p.world_y;
    sq += dx * dx + dy * dy;
  }
  cal.fit_residual = std::sqrt(sq / static_cast<double>(points.size()));
  return cal;
}

/// Maps every record's coordinates to world units; pedestrian numbers and
/// times are untouched.
inline std::vector<NtxyRecord> apply_calibration(const Calibration& cal,
                                                 std::vector<NtxyRecord> records) {
  for (auto& r : records) {
    Vec2 mapped = cal.apply(r.x, r.y);
    r.x = mapped.x;
    r.y = mapped.y;
  }
  return records;
}

/// Pedestrian trap: the world-coordinate rectangle inside which observations
/// count. Flow runs along Y, so the trap length is the Y extent.
struct TrapConfig {
  Rect rect;

  double length() const { return rect.height(); }
  double area() const { return rect.width() * rect.height(); }
  bool contains(double x, double y) const { return rect.contains(x, y); }
};

inline constexpr const char* kControlPointHeader = "Xi, Yi, Xr, Yr";

inline std::vector<ControlPoint> read_control_points(std::istream& in,
                                                     const std::string& path) {
  std::string line;
  bool header_seen = false;
  std::vector<ControlPoint> points;
  while (std::getline(in, line)) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (!header_seen) {
      if (std::string(t) != kControlPointHeader)
        throw InputError(path + ": expected header '" + kControlPointHeader + "'");
      header_seen = true;
      continue;
    }
    auto f = split(t, ',');
    if (f.size() != 4) throw InputError(path + ": expected 4 fields per control point");
    points.push_back({parse_double(f[0], path), parse_double(f[1], path),
                      parse_double(f[2], path), parse_double(f[3], path)});
  }
  if (!header_seen) throw InputError(path + ": missing header line");
  return points;
}

inline std::vector<ControlPoint> read_control_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  return read_control_points(in, path);
}

inline void write_calibration(const std::string& path, const Calibration& cal,
                              const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw InputError(path + ": cannot open for writing");
  if (!comment.empty()) out << "# " << comment << "\n";
  out << "u, v, w, x0, y0, z0, residual\n";
  out << fmt_num(cal.u) << ", " << fmt_num(cal.v) << ", " << fmt_num(cal.w) << ", "
      << fmt_num(cal.x0) << ", " << fmt_num(cal.y0) << ", " << fmt_num(cal.z0) << ", "
      << fmt_num(cal.fit_residual) << "\n";
}

inline Calibration read_calibration(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (!header_seen) {
      if (std::string(t) != "u, v, w, x0, y0, z0, residual")
        throw InputError(path + ": unexpected calibration header");
      header_seen = true;
      continue;
    }
    auto f = split(t, ',');
    if (f.size() != 7) throw InputError(path + ": expected 7 calibration fields");
    Calibration cal;
    cal.u = parse_double(f[0], path);
    cal.v = parse_double(f[1], path);
    cal.w = parse_double(f[2], path);
    cal.x0 = parse_double(f[3], path);
    cal.y0 = parse_double(f[4], path);
    cal.z0 = parse_double(f[5], path);
    cal.fit_residual = parse_double(f[6], path);
    return cal;
  }
  throw InputError(path + ": no calibration row");
}

}  // namespace pedtrack
