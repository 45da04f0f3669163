#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pedtrack/database.hpp"
#include "pedtrack/metrics.hpp"
#include "pedtrack/pipeline.hpp"
#include "pedtrack/scenario_file.hpp"
#include "pedtrack/synth.hpp"

namespace pedtrack {

namespace cli_detail {

struct ConfigKey {
  const char* name;
  const char* help;
};

inline constexpr ConfigKey kConfigKeys[] = {
    {"theta", "background subtraction threshold, gray levels (default 15)"},
    {"area_threshold", "minimum object area in pixels (default 30)"},
    {"morph_radius", "structuring element half-width (default 1)"},
    {"voting_threshold", "vote percentage a match must reach (default 50)"},
    {"speed_threshold", "max displacement in pixels per slice (required for tracking)"},
    {"max_gap", "consecutive missing slices a track survives (default 3)"},
    {"frame_interval", "seconds per slice (default 1)"},
    {"trap_min_x", "pedestrian trap rectangle, lower X"},
    {"trap_min_y", "pedestrian trap rectangle, lower Y"},
    {"trap_max_x", "pedestrian trap rectangle, upper X"},
    {"trap_max_y", "pedestrian trap rectangle, upper Y"},
    {"calibration", "calibration file mapping image to world coordinates"},
    {"background", "'median' or a background image file (default median)"},
};

// Collects --config plus one flag per config key; flags override the file.
class ConfigCli {
 public:
  void register_options(CLI::App* cmd) {
    cmd->add_option("--config", config_path_, "flat key=value config file");
    for (const auto& key : kConfigKeys) {
      std::string name = key.name;
      cmd->add_option_function<std::string>(
          "--" + name, [this, name](const std::string& v) { flag_values_[name] = v; },
          key.help);
    }
  }

  PipelineConfig resolve() const {
    PipelineConfig config;
    if (!config_path_.empty())
      for (const auto& [k, v] : read_config_file(config_path_)) config.set(k, v);
    for (const auto& [k, v] : flag_values_) config.set(k, v);
    config.validate_common();
    return config;
  }

 private:
  std::string config_path_;
  std::map<std::string, std::string> flag_values_;
};

inline std::vector<std::string> list_frames(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> paths;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".pgm" || ext == ".ppm") paths.push_back(entry.path().string());
  }
  if (ec || paths.empty()) throw InputError("no input frames in '" + dir + "'");
  std::sort(paths.begin(), paths.end());
  return paths;
}

inline std::string frame_name(int slice) {
  std::ostringstream name;
  name << "frame_" << std::setfill('0') << std::setw(6) << slice << ".ppm";
  return name.str();
}

inline std::vector<FeatureRow> detect_database(const std::string& frames_dir,
                                               const PipelineConfig& config,
                                               std::vector<int>* per_slice_counts) {
  ImageStack stack = load_image_sequence(list_frames(frames_dir), config.frame_interval);
  ColorImage background = resolve_background(config, stack);
  std::vector<FeatureRow> rows;
  for (int i = 0; i < stack.frame_count(); ++i) {
    auto det = detect_frame(stack.frames[i], background, config.detect_params(), i + 1);
    if (per_slice_counts) per_slice_counts->push_back(static_cast<int>(det.rows.size()));
    rows.insert(rows.end(), det.rows.begin(), det.rows.end());
  }
  return rows;
}

inline int cmd_detect(const std::string& frames_dir, const std::string& out_path,
                      const std::string& masks_dir, const PipelineConfig& config,
                      std::ostream& out) {
  namespace fs = std::filesystem;
  ImageStack stack = load_image_sequence(list_frames(frames_dir), config.frame_interval);
  ColorImage background = resolve_background(config, stack);

  if (!masks_dir.empty()) fs::create_directories(masks_dir);
  std::vector<FeatureRow> rows;
  for (int i = 0; i < stack.frame_count(); ++i) {
    auto det = detect_frame(stack.frames[i], background, config.detect_params(), i + 1);
    out << "slice " << (i + 1) << ": " << det.rows.size() << " objects\n";
    if (!masks_dir.empty()) {
      std::ostringstream name;
      name << "mask_" << std::setfill('0') << std::setw(6) << (i + 1) << ".pgm";
      write_mask_pgm((fs::path(masks_dir) / name.str()).string(), det.mask);
    }
    rows.insert(rows.end(), det.rows.begin(), det.rows.end());
  }
  write_descriptor_db(out_path, rows, "pedtrack detect: " + config.echo());
  out << "wrote " << rows.size() << " rows to " << out_path << "\n";
  return 0;
}

inline int cmd_track(const std::string& db_path, const std::string& frames_dir,
                     const std::string& out_path, const PipelineConfig& config,
                     std::ostream& out) {
  std::vector<FeatureRow> db = db_path.empty()
                                   ? detect_database(frames_dir, config, nullptr)
                                   : read_descriptor_db(db_path);
  TraceResult result = run_tracking(db, config);
  write_ntxy(out_path, result.records, "pedtrack track: " + config.echo());

  int pedestrians = 0, last_slice = 0;
  for (const auto& r : result.records) {
    pedestrians = std::max(pedestrians, r.pedestrian_number);
    last_slice = std::max(last_slice, r.time);
  }
  out << "pedestrians: " << pedestrians << ", slices processed: " << last_slice << "\n";
  out << "wrote " << result.records.size() << " records to " << out_path << "\n";
  return 0;
}

inline int cmd_metrics(const std::string& ntxy_path, int t1, int t2,
                       const std::string& out_path, const std::string& series_path,
                       const PipelineConfig& config, std::ostream& out) {
  if (t1 >= t2) throw InputError("interval must satisfy T1 < T2");
  auto records = read_ntxy(ntxy_path);
  TrapConfig trap = config.trap();
  auto tracks = build_tracks(records, trap, config.frame_interval);
  FlowReport report = flow_report(tracks, trap, t1, t2, config.frame_interval);

  std::string comment = "pedtrack metrics: " + config.echo() + " t1=" + std::to_string(t1) +
                        " t2=" + std::to_string(t2);
  write_flow_report(out_path, report, comment);
  if (!series_path.empty()) write_track_series(series_path, tracks, comment);

  out << "kappa: " << report.kappa << ", flow rate: " << fmt_num(report.flow_rate)
      << "/s, TMS: "
      << (report.time_mean_speed ? fmt_num(*report.time_mean_speed) : "nan") << ", SMS: "
      << (report.space_mean_speed ? fmt_num(*report.space_mean_speed) : "nan") << "\n";
  out << "wrote report to " << out_path << "\n";
  return 0;
}

inline int cmd_synth(const std::string& scenario_path, const std::string& out_dir,
                     const std::string& truth_path, std::ostream& out) {
  namespace fs = std::filesystem;
  Scenario scenario = parse_scenario_file(scenario_path);
  RenderResult rendered = render_scenario(scenario);

  fs::create_directories(out_dir);
  for (int i = 0; i < rendered.stack.frame_count(); ++i)
    write_ppm((fs::path(out_dir) / frame_name(i + 1)).string(), rendered.stack.frames[i]);

  std::ostringstream comment;
  comment << "pedtrack synth: scenario=" << scenario_path << " canvas=" << scenario.width
          << "x" << scenario.height << " frames=" << scenario.frame_count
          << " seed=" << scenario.seed << " noise=" << scenario.noise_amplitude
          << " actors=" << scenario.actors.size();
  write_truth(truth_path, rendered.truth, comment.str());

  out << "rendered " << rendered.stack.frame_count() << " frames (" << scenario.width << "x"
      << scenario.height << ") to " << out_dir << "\n";
  return 0;
}

inline int cmd_score(const std::string& ntxy_path, const std::string& truth_path,
                     const std::string& out_path, double match_radius, std::ostream& out) {
  auto records = read_ntxy(ntxy_path);
  auto truth = read_truth(truth_path);
  ScoreReport report = score_tracking(records, truth, match_radius);

  std::string comment = "pedtrack score: ntxy=" + ntxy_path + " truth=" + truth_path +
                        " match_radius=" + fmt_num(match_radius);
  if (!out_path.empty()) write_score_report(out_path, report, comment);

  out << "actors: " << report.actor_count << ", tracks: " << report.track_count
      << ", identity rate: " << fmt_num(report.identity_rate)
      << "%, rms: " << fmt_num(report.rms_error) << ", fp: " << report.false_positives
      << ", fn: " << report.false_negatives << "\n";
  return 0;
}

inline int cmd_calibrate(const std::string& points_path, const std::string& out_path,
                         std::ostream& out) {
  auto points = read_control_points(points_path);
  Calibration cal = fit_calibration(points);
  write_calibration(out_path, cal, "pedtrack calibrate: points=" + points_path);
  out << "fit residual: " << fmt_num(cal.fit_residual) << " (" << points.size()
      << " control points)\n";
  return 0;
}

}  // namespace cli_detail

/// Entry point shared by the binary and the tests. Exit codes: 0 success,
/// 1 processing failure, 2 usage or input error.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"pedestrian tracking pipeline: image stacks to traffic-flow measures"};
  app.require_subcommand(1);

  cli_detail::ConfigCli detect_cfg, track_cfg, metrics_cfg;

  auto* detect = app.add_subcommand("detect", "build the descriptor database from frames");
  std::string detect_frames, detect_out, detect_masks;
  detect->add_option("--frames", detect_frames, "directory of PGM/PPM frames")->required();
  detect->add_option("--out", detect_out, "descriptor database output file")->required();
  detect->add_option("--masks-out", detect_masks, "directory for debug foreground masks");
  detect_cfg.register_options(detect);

  auto* track = app.add_subcommand("track", "assign pedestrian numbers and write NTXY");
  std::string track_db, track_frames, track_out;
  track->add_option("--db", track_db, "descriptor database input file");
  track->add_option("--frames", track_frames, "frame directory (runs detection first)");
  track->add_option("--out", track_out, "NTXY output file")->required();
  track_cfg.register_options(track);

  auto* metrics = app.add_subcommand("metrics", "reduce NTXY to traffic-flow measures");
  std::string metrics_ntxy, metrics_out, metrics_series;
  int t1 = 0, t2 = 0;
  metrics->add_option("--ntxy", metrics_ntxy, "NTXY input file")->required();
  metrics->add_option("--t1", t1, "interval start slice")->required();
  metrics->add_option("--t2", t2, "interval end slice")->required();
  metrics->add_option("--out", metrics_out, "flow report output file")->required();
  metrics->add_option("--series-out", metrics_series, "per-track trajectory/speed series");
  metrics_cfg.register_options(metrics);

  auto* synth = app.add_subcommand("synth", "render a synthetic scenario to frames");
  std::string synth_scenario, synth_dir, synth_truth;
  synth->add_option("--scenario", synth_scenario, "scenario description file")->required();
  synth->add_option("--out-dir", synth_dir, "directory for rendered frames")->required();
  synth->add_option("--truth-out", synth_truth, "ground-truth output file")->required();

  auto* score = app.add_subcommand("score", "compare NTXY output against ground truth");
  std::string score_ntxy, score_truth, score_out;
  double match_radius = 5.0;
  score->add_option("--ntxy", score_ntxy, "NTXY input file")->required();
  score->add_option("--truth", score_truth, "ground-truth file")->required();
  score->add_option("--out", score_out, "score report output file");
  score->add_option("--match-radius", match_radius, "max mean centroid distance, px");

  auto* calibrate = app.add_subcommand("calibrate", "fit the image-to-world transform");
  std::string cal_points, cal_out;
  calibrate->add_option("--points", cal_points, "control point file (Xi, Yi, Xr, Yr)")
      ->required();
  calibrate->add_option("--out", cal_out, "calibration output file")->required();

  std::vector<std::string> argv_strings = args;
  std::vector<const char*> argv;
  argv.push_back("pedtrack");
  for (const auto& a : argv_strings) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(detect))
      return cli_detail::cmd_detect(detect_frames, detect_out, detect_masks,
                                    detect_cfg.resolve(), out);
    if (app.got_subcommand(track)) {
      if (track_db.empty() == track_frames.empty())
        throw InputError("track needs exactly one of --db or --frames");
      return cli_detail::cmd_track(track_db, track_frames, track_out, track_cfg.resolve(),
                                   out);
    }
    if (app.got_subcommand(metrics))
      return cli_detail::cmd_metrics(metrics_ntxy, t1, t2, metrics_out, metrics_series,
                                     metrics_cfg.resolve(), out);
    if (app.got_subcommand(synth))
      return cli_detail::cmd_synth(synth_scenario, synth_dir, synth_truth, out);
    if (app.got_subcommand(score))
      return cli_detail::cmd_score(score_ntxy, score_truth, score_out, match_radius, out);
    if (app.got_subcommand(calibrate))
      return cli_detail::cmd_calibrate(cal_points, cal_out, out);
    err << "no subcommand selected\n";
    return 2;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace pedtrack
