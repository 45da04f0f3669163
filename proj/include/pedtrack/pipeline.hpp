#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pedtrack/background.hpp"
#include "pedtrack/calibration.hpp"
#include "pedtrack/features.hpp"
#include "pedtrack/netpbm.hpp"
#include "pedtrack/tracing.hpp"
#include "pedtrack/util.hpp"
#include "pedtrack/voting.hpp"

namespace pedtrack {

/// Effective settings of a pipeline run. Values come from defaults, then the
/// config file, then command-line flags, in that order of precedence.
struct PipelineConfig {
  int theta = 15;
  int area_threshold = 30;
  int morph_radius = 1;
  double voting_threshold = 50.0;
  double speed_threshold = 0.0;  // required for tracking; no universal default
  int max_gap = 3;
  double frame_interval = 1.0;  // seconds per slice
  double trap_min_x = 0.0, trap_min_y = 0.0, trap_max_x = 0.0, trap_max_y = 0.0;
  bool trap_set = false;
  std::string calibration;            // optional calibration file
  std::string background = "median";  // "median" or a background image path

  DetectParams detect_params() const { return {theta, area_threshold, morph_radius}; }

  VoteParams vote_params() const {
    VoteParams p{voting_threshold, speed_threshold, max_gap};
    p.validate();
    return p;
  }

  TrapConfig trap() const {
    if (!trap_set) throw InputError("trap rectangle not configured");
    if (trap_min_x >= trap_max_x || trap_min_y >= trap_max_y)
      throw InputError("trap rectangle is empty");
    return TrapConfig{Rect{trap_min_x, trap_min_y, trap_max_x, trap_max_y}};
  }

  void set(const std::string& key, const std::string& value) {
    const std::string context = "config key '" + key + "'";
    if (key == "theta")
      theta = parse_int(value, context);
    else if (key == "area_threshold")
      area_threshold = parse_int(value, context);
    else if (key == "morph_radius")
      morph_radius = parse_int(value, context);
    else if (key == "voting_threshold")
      voting_threshold = parse_double(value, context);
    else if (key == "speed_threshold")
      speed_threshold = parse_double(value, context);
    else if (key == "max_gap")
      max_gap = parse_int(value, context);
    else if (key == "frame_interval")
      frame_interval = parse_double(value, context);
    else if (key == "trap_min_x")
      set_trap_value(trap_min_x, value, context);
    else if (key == "trap_min_y")
      set_trap_value(trap_min_y, value, context);
    else if (key == "trap_max_x")
      set_trap_value(trap_max_x, value, context);
    else if (key == "trap_max_y")
      set_trap_value(trap_max_y, value, context);
    else if (key == "calibration")
      calibration = value;
    else if (key == "background")
      background = value;
    else
      throw InputError("unknown config key '" + key + "'");
  }

  void validate_common() const {
    if (theta < 0 || theta > 255) throw InputError("theta must be in [0, 255]");
    if (area_threshold < 0) throw InputError("area_threshold must be >= 0");
    if (morph_radius < 0) throw InputError("morph_radius must be >= 0");
    if (frame_interval <= 0.0) throw InputError("frame_interval must be positive");
  }

  /// Deterministic one-line record of every effective value; written as a
  /// comment into each output file.
  std::string echo() const {
    std::ostringstream out;
    out << "theta=" << theta << " area_threshold=" << area_threshold
        << " morph_radius=" << morph_radius << " voting_threshold="
        << fmt_num(voting_threshold) << " speed_threshold=" << fmt_num(speed_threshold)
        << " max_gap=" << max_gap << " frame_interval=" << fmt_num(frame_interval);
    if (trap_set)
      out << " trap_min_x=" << fmt_num(trap_min_x) << " trap_min_y=" << fmt_num(trap_min_y)
          << " trap_max_x=" << fmt_num(trap_max_x) << " trap_max_y=" << fmt_num(trap_max_y);
    out << " calibration=" << (calibration.empty() ? "none" : calibration)
        << " background=" << background;
    return out.str();
  }

 private:
  void set_trap_value(double& field, const std::string& value, const std::string& context) {
    field = parse_double(value, context);
    trap_set = true;
  }
};

/// Flat key=value file; '#' starts a comment. Returns pairs in file order.
inline std::vector<std::pair<std::string, std::string>> read_config_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw InputError(path + ":" + std::to_string(line_no) + ": expected key=value");
    entries.emplace_back(std::string(trim(t.substr(0, eq))),
                         std::string(trim(t.substr(eq + 1))));
  }
  return entries;
}

/// Resolves the background image: "median" builds it from the stack itself,
/// anything else is read as a PGM/PPM file.
inline ColorImage resolve_background(const PipelineConfig& config, const ImageStack& stack) {
  if (config.background == "median") return median_background(stack);
  ColorImage bg = read_image(config.background);
  if (!stack.frames.empty() && !bg.same_size(stack.frames[0]))
    throw InputError(config.background + ": background dimensions do not match frames");
  return bg;
}

/// detect + track in one pass; the calibration, when configured, maps the
/// NTXY coordinates to world units.
inline TraceResult run_tracking(const std::vector<FeatureRow>& db,
                                const PipelineConfig& config) {
  TraceResult result = trace_stack(db, config.vote_params());
  if (!config.calibration.empty()) {
    Calibration cal = read_calibration(config.calibration);
    result.records = apply_calibration(cal, result.records);
  }
  return result;
}

}  // namespace pedtrack
