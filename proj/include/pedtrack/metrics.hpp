#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pedtrack/calibration.hpp"
#include "pedtrack/geometry.hpp"
#include "pedtrack/tracing.hpp"
#include "pedtrack/util.hpp"

namespace pedtrack {

/// One pedestrian's in-trap observation run. Times are slice numbers spaced
/// dt slices apart; theta_seconds converts slices to seconds.
struct Track {
  int pedestrian_number = 0;
  std::vector<NtxyRecord> observations;  // strictly increasing in time
  int t_in = 0;   // first recorded slice
  int t_out = 0;  // last recorded slice
  int rho = 0;    // observation count
  int dt = 1;
  double theta_seconds = 1.0;

  std::optional<Vec2> position_at(int t) const {
    if (t < t_in || t > t_out) return std::nullopt;
    if ((t - t_in) % dt != 0) return std::nullopt;
    const auto& obs = observations[static_cast<std::size_t>((t - t_in) / dt)];
    return Vec2{obs.x, obs.y};
  }
};

/// Groups records per pedestrian, keeps only positions inside the trap, and
/// retains each pedestrian's longest contiguous in-trap run (the first one
/// on ties). Runs shorter than 2 observations are dropped.
inline std::vector<Track> build_tracks(const std::vector<NtxyRecord>& records,
                                       const TrapConfig& trap, double theta_seconds) {
  if (theta_seconds <= 0.0) throw InputError("frame interval must be positive");

  std::map<int, std::vector<NtxyRecord>> grouped;
  for (const auto& r : records) grouped[r.pedestrian_number].push_back(r);

  std::vector<Track> tracks;
  for (auto& [ped, obs] : grouped) {
    std::sort(obs.begin(), obs.end(),
              [](const NtxyRecord& a, const NtxyRecord& b) { return a.time < b.time; });
    for (std::size_t i = 1; i < obs.size(); ++i)
      if (obs[i].time == obs[i - 1].time)
        throw InputError("duplicate observation time for pedestrian " + std::to_string(ped));

    // Longest run of consecutive slices that stay inside the trap.
    std::size_t best_start = 0, best_len = 0, run_start = 0, run_len = 0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
      bool inside = trap.contains(obs[i].x, obs[i].y);
      bool contiguous = run_len > 0 && obs[i].time == obs[i - 1].time + 1;
      if (!inside) {
        run_len = 0;
        continue;
      }
      if (!contiguous) {
        run_start = i;
        run_len = 0;
      }
      ++run_len;
      if (run_len > best_len) {
        best_len = run_len;
        best_start = run_start;
      }
    }
    if (best_len < 2) continue;

    Track track;
    track.pedestrian_number = ped;
    track.observations.assign(obs.begin() + best_start, obs.begin() + best_start + best_len);
    track.t_in = track.observations.front().time;
    track.t_out = track.observations.back().time;
    track.rho = static_cast<int>(best_len);
    track.dt = 1;
    track.theta_seconds = theta_seconds;
    tracks.push_back(std::move(track));
  }
  return tracks;
}

/// Path length over the track divided by elapsed time: world units per
/// second.
inline double individual_speed(const Track& track) {
  if (track.rho < 2) throw std::invalid_argument("speed needs at least 2 observations");
  double path = 0.0;
  for (std::size_t i = 1; i < track.observations.size(); ++i) {
    double dx = track.observations[i].x - track.observations[i - 1].x;
    double dy = track.observations[i].y - track.observations[i - 1].y;
    path += std::hypot(dx, dy);
  }
  double elapsed_seconds = static_cast<double>(track.t_out - track.t_in) * track.theta_seconds;
  return path / elapsed_seconds;
}

/// Minimum distance to any other pedestrian present at each of the track's
/// times. Times with no other pedestrian present are omitted.
inline std::vector<std::pair<int, double>> headway_series(const Track& track,
                                                          const std::vector<Track>& all_tracks) {
  std::vector<std::pair<int, double>> series;
  for (const auto& obs : track.observations) {
    std::optional<double> best;
    for (const auto& other : all_tracks) {
      if (other.pedestrian_number == track.pedestrian_number) continue;
      auto pos = other.position_at(obs.time);
      if (!pos) continue;
      double d = std::hypot(pos->x - obs.x, pos->y - obs.y);
      if (!best || d < *best) best = d;
    }
    if (best) series.emplace_back(obs.time, *best);
  }
  return series;
}

struct PedestrianStats {
  int pedestrian_number = 0;
  double speed = 0.0;                    // world units per second
  std::optional<Vec2> direction;         // unit vector; empty when start == end
  int t_in = 0, t_out = 0, rho = 0;
  std::vector<std::pair<int, double>> headways;
};

struct FlowReport {
  int t1 = 0, t2 = 0;
  int kappa = 0;                          // pedestrians present during the interval
  double flow_rate = 0.0;                 // pedestrians per second
  std::optional<double> time_mean_speed;
  std::optional<double> space_mean_speed; // harmonic mean over positive speeds
  std::optional<double> area_module;      // trap area per pedestrian
  std::optional<double> density;          // pedestrians per trap area
  int zero_speed_count = 0;               // excluded from space mean speed
  int line_crossings = 0;                 // pedestrians crossing the trap midline
  std::vector<PedestrianStats> per_pedestrian;
};

/// Reduces tracks to the aggregate flow quantities over [t1, t2]. A
/// pedestrian counts when its track overlaps the interval. The auxiliary
/// line-crossing figure counts pedestrians whose consecutive observations
/// straddle the trap's Y midline within the interval.
inline FlowReport flow_report(const std::vector<Track>& tracks, const TrapConfig& trap,
                              int t1, int t2, double theta_seconds) {
  if (t1 >= t2) throw InputError("interval must satisfy T1 < T2");
  if (theta_seconds <= 0.0) throw InputError("frame interval must be positive");

  FlowReport report;
  report.t1 = t1;
  report.t2 = t2;

  std::vector<const Track*> members;
  for (const auto& t : tracks)
    if (t.t_in <= t2 && t.t_out >= t1) members.push_back(&t);

  report.kappa = static_cast<int>(members.size());
  report.flow_rate =
      static_cast<double>(report.kappa) / (static_cast<double>(t2 - t1) * theta_seconds);
  if (report.kappa == 0) {
    report.flow_rate = 0.0;
    return report;
  }

  double speed_sum = 0.0, inv_speed_sum = 0.0;
  int positive_speeds = 0;
  const double mid_y = 0.5 * (trap.rect.min_y + trap.rect.max_y);

  for (const Track* t : members) {
    PedestrianStats stats;
    stats.pedestrian_number = t->pedestrian_number;
    stats.t_in = t->t_in;
    stats.t_out = t->t_out;
    stats.rho = t->rho;
    stats.speed = individual_speed(*t);
    speed_sum += stats.speed;
    if (stats.speed > 0.0) {
      inv_speed_sum += 1.0 / stats.speed;
      ++positive_speeds;
    } else {
      ++report.zero_speed_count;
    }

    Vec2 straight{t->observations.back().x - t->observations.front().x,
                  t->observations.back().y - t->observations.front().y};
    double norm = straight.norm();
    if (norm > 0.0) stats.direction = Vec2{straight.x / norm, straight.y / norm};

    stats.headways = headway_series(*t, tracks);

    bool crossed = false;
    for (std::size_t i = 1; i + 0 < t->observations.size() && !crossed; ++i) {
      const auto& a = t->observations[i - 1];
      const auto& b = t->observations[i];
      if (a.time < t1 || b.time > t2) continue;
      if (a.y == b.y) continue;
      if ((a.y - mid_y) * (b.y - mid_y) <= 0.0) crossed = true;
    }
    if (crossed) ++report.line_crossings;

    report.per_pedestrian.push_back(std::move(stats));
  }

  report.time_mean_speed = speed_sum / static_cast<double>(report.kappa);
  if (positive_speeds > 0)
    report.space_mean_speed = static_cast<double>(positive_speeds) / inv_speed_sum;
  if (trap.area() > 0.0) {
    report.area_module = trap.area() / static_cast<double>(report.kappa);
    report.density = static_cast<double>(report.kappa) / trap.area();
  }
  return report;
}

namespace detail {

inline std::string opt_num(const std::optional<double>& v) {
  return v ? fmt_num(*v) : "nan";
}

}  // namespace detail

/// Comma-separated summary block followed by the per-pedestrian table.
inline void write_flow_report(std::ostream& out, const FlowReport& report,
                              const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << "\n";
  out << "Kappa, FlowRatePerSec, TimeMeanSpeed, SpaceMeanSpeed, AreaModulePerPed, Density, "
         "ZeroSpeedPeds, LineCrossings, T1, T2\n";
  out << report.kappa << ", " << fmt_num(report.flow_rate) << ", "
      << detail::opt_num(report.time_mean_speed) << ", "
      << detail::opt_num(report.space_mean_speed) << ", "
      << detail::opt_num(report.area_module) << ", " << detail::opt_num(report.density)
      << ", " << report.zero_speed_count << ", " << report.line_crossings << ", "
      << report.t1 << ", " << report.t2 << "\n";
  out << "PedNum, Speed, DirX, DirY, Ti, To, Rho, MeanHeadway\n";
  for (const auto& p : report.per_pedestrian) {
    std::optional<double> mean_headway;
    if (!p.headways.empty()) {
      double s = 0.0;
      for (const auto& [t, h] : p.headways) s += h;
      mean_headway = s / static_cast<double>(p.headways.size());
    }
    out << p.pedestrian_number << ", " << fmt_num(p.speed) << ", "
        << (p.direction ? fmt_num(p.direction->x) : "nan") << ", "
        << (p.direction ? fmt_num(p.direction->y) : "nan") << ", " << p.t_in << ", "
        << p.t_out << ", " << p.rho << ", " << detail::opt_num(mean_headway) << "\n";
  }
}

inline void write_flow_report(const std::string& path, const FlowReport& report,
                              const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw InputError(path + ": cannot open for writing");
  write_flow_report(out, report, comment);
  if (!out) throw std::runtime_error(path + ": write failed");
}

/// Plottable per-track series: trajectory, instantaneous speed and headway
/// per observation time.
inline void write_track_series(std::ostream& out, const std::vector<Track>& tracks,
                               const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << "\n";
  out << "PedNum, T, X, Y, Speed, Headway\n";
  for (const auto& track : tracks) {
    auto headways = headway_series(track, tracks);
    std::map<int, double> headway_at;
    for (const auto& [t, h] : headways) headway_at[t] = h;
    for (std::size_t i = 0; i < track.observations.size(); ++i) {
      const auto& obs = track.observations[i];
      std::string speed = "nan";
      if (track.observations.size() >= 2) {
        // Forward-difference speed; the last point repeats the final segment.
        std::size_t a = i + 1 < track.observations.size() ? i : i - 1;
        const auto& p0 = track.observations[a];
        const auto& p1 = track.observations[a + 1];
        speed = fmt_num(std::hypot(p1.x - p0.x, p1.y - p0.y) /
                        (static_cast<double>(track.dt) * track.theta_seconds));
      }
      auto h = headway_at.find(obs.time);
      out << track.pedestrian_number << ", " << obs.time << ", " << fmt_num(obs.x) << ", "
          << fmt_num(obs.y) << ", " << speed << ", "
          << (h != headway_at.end() ? fmt_num(h->second) : "nan") << "\n";
    }
  }
}

inline void write_track_series(const std::string& path, const std::vector<Track>& tracks,
                               const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw InputError(path + ": cannot open for writing");
  write_track_series(out, tracks, comment);
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace pedtrack
