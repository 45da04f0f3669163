#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "pedtrack/features.hpp"
#include "pedtrack/tracing.hpp"
#include "pedtrack/util.hpp"

namespace pedtrack {

inline constexpr const char* kDescriptorDbHeader =
    "SlcObjNum, PedNum, sliceNum, cg_Area_X, cg_Area_Y, Area, Width, Height, Perimeter, "
    "Compactness, Mean_R, Mean_G, Mean_B, Std_R, Std_G, Std_B, Skewness, Kurtosis, "
    "cg_Color_X, cg_Color_Y";

inline constexpr const char* kNtxyHeader = "PedNum, T, X, Y";

namespace detail {

// Skips blank and '#' comment lines.
inline bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    line = std::string(t);
    return true;
  }
  return false;
}

inline void expect_header(std::istream& in, const char* header, const std::string& path) {
  std::string line;
  if (!next_data_line(in, line)) throw InputError(path + ": missing header line");
  if (line != header)
    throw InputError(path + ": unexpected header '" + line + "'");
}

inline std::vector<std::string> fields(const std::string& line, std::size_t expected,
                                       const std::string& path) {
  auto out = split(line, ',');
  if (out.size() != expected)
    throw InputError(path + ": expected " + std::to_string(expected) + " fields, got " +
                     std::to_string(out.size()));
  return out;
}

}  // namespace detail

inline void write_descriptor_db(std::ostream& out, const std::vector<FeatureRow>& rows,
                                const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << "\n";
  out << kDescriptorDbHeader << "\n";
  for (const auto& r : rows) {
    out << r.slice_object_number << ", " << r.pedestrian_number << ", " << r.slice_number
        << ", " << fmt_num(r.cg_area_x) << ", " << fmt_num(r.cg_area_y) << ", " << r.area
        << ", " << r.width << ", " << r.height << ", " << fmt_num(r.perimeter) << ", "
        << fmt_num(r.compactness) << ", " << fmt_num(r.mean_r) << ", " << fmt_num(r.mean_g)
        << ", " << fmt_num(r.mean_b) << ", " << fmt_num(r.std_r) << ", " << fmt_num(r.std_g)
        << ", " << fmt_num(r.std_b) << ", " << fmt_num(r.skewness) << ", "
        << fmt_num(r.kurtosis) << ", " << fmt_num(r.cg_color_x) << ", "
        << fmt_num(r.cg_color_y) << "\n";
  }
}

inline void write_descriptor_db(const std::string& path, const std::vector<FeatureRow>& rows,
                                const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw InputError(path + ": cannot open for writing");
  write_descriptor_db(out, rows, comment);
  if (!out) throw std::runtime_error(path + ": write failed");
}

inline std::vector<FeatureRow> read_descriptor_db(std::istream& in, const std::string& path) {
  detail::expect_header(in, kDescriptorDbHeader, path);
  std::vector<FeatureRow> rows;
  std::string line;
  while (detail::next_data_line(in, line)) {
    auto f = detail::fields(line, 20, path);
    FeatureRow r;
    r.slice_object_number = parse_int(f[0], path);
    r.pedestrian_number = parse_int(f[1], path);
    r.slice_number = parse_int(f[2], path);
    r.cg_area_x = parse_double(f[3], path);
    r.cg_area_y = parse_double(f[4], path);
    r.area = parse_int(f[5], path);
    r.width = parse_int(f[6], path);
    r.height = parse_int(f[7], path);
    r.perimeter = parse_double(f[8], path);
    r.compactness = parse_double(f[9], path);
    r.mean_r = parse_double(f[10], path);
    r.mean_g = parse_double(f[11], path);
    r.mean_b = parse_double(f[12], path);
    r.std_r = parse_double(f[13], path);
    r.std_g = parse_double(f[14], path);
    r.std_b = parse_double(f[15], path);
    r.skewness = parse_double(f[16], path);
    r.kurtosis = parse_double(f[17], path);
    r.cg_color_x = parse_double(f[18], path);
    r.cg_color_y = parse_double(f[19], path);
    rows.push_back(r);
  }
  return rows;
}

inline std::vector<FeatureRow> read_descriptor_db(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  return read_descriptor_db(in, path);
}

inline void write_ntxy(std::ostream& out, const std::vector<NtxyRecord>& records,
                       const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << "\n";
  out << kNtxyHeader << "\n";
  for (const auto& r : records)
    out << r.pedestrian_number << ", " << r.time << ", " << fmt_num(r.x) << ", "
        << fmt_num(r.y) << "\n";
}

inline void write_ntxy(const std::string& path, const std::vector<NtxyRecord>& records,
                       const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw InputError(path + ": cannot open for writing");
  write_ntxy(out, records, comment);
  if (!out) throw std::runtime_error(path + ": write failed");
}

inline std::vector<NtxyRecord> read_ntxy(std::istream& in, const std::string& path) {
  detail::expect_header(in, kNtxyHeader, path);
  std::vector<NtxyRecord> records;
  std::string line;
  while (detail::next_data_line(in, line)) {
    auto f = detail::fields(line, 4, path);
    NtxyRecord r;
    r.pedestrian_number = parse_int(f[0], path);
    r.time = parse_int(f[1], path);
    r.x = parse_double(f[2], path);
    r.y = parse_double(f[3], path);
    records.push_back(r);
  }
  return records;
}

inline std::vector<NtxyRecord> read_ntxy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  return read_ntxy(in, path);
}

}  // namespace pedtrack
