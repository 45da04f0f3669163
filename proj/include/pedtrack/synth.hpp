#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "pedtrack/geometry.hpp"
#include "pedtrack/image.hpp"
#include "pedtrack/tracing.hpp"
#include "pedtrack/util.hpp"

namespace pedtrack {

/// One scripted actor. Waypoints are spread uniformly over [entry, exit];
/// positions in between are linearly interpolated. Hide windows model full
/// occlusion: the actor is simply not drawn (and not in the truth) there.
struct ActorSpec {
  enum class Shape { Disk, Rectangle };
  Shape shape = Shape::Disk;
  double size = 5.0;  // disk radius / rectangle half-extent, pixels
  std::array<int, 3> color{255, 255, 255};
  int entry = 1;
  int exit = 1;
  std::vector<Vec2> waypoints;
  std::vector<std::pair<int, int>> hide;  // inclusive slice ranges

  bool hidden_at(int t) const {
    for (const auto& [a, b] : hide)
      if (t >= a && t <= b) return true;
    return false;
  }

  bool present_at(int t) const { return t >= entry && t <= exit && !hidden_at(t); }

  Vec2 position_at(int t) const {
    if (waypoints.size() == 1 || exit == entry) return waypoints.front();
    double s = static_cast<double>(t - entry) / (exit - entry);
    double seg = s * static_cast<double>(waypoints.size() - 1);
    auto i = static_cast<std::size_t>(seg);
    if (i >= waypoints.size() - 1) i = waypoints.size() - 2;
    double u = seg - static_cast<double>(i);
    return waypoints[i] + (waypoints[i + 1] - waypoints[i]) * u;
  }
};

struct Scenario {
  int width = 320;
  int height = 240;
  std::array<int, 3> background{0, 0, 0};
  int frame_count = 1;
  double frame_interval = 1.0;
  unsigned seed = 0;
  int noise_amplitude = 0;  // uniform per-channel noise in [-a, a]
  std::vector<ActorSpec> actors;

  void validate() const {
    if (width <= 0 || height <= 0) throw InputError("scenario: canvas must be positive");
    if (frame_count < 1) throw InputError("scenario: frame count must be >= 1");
    if (frame_interval <= 0.0) throw InputError("scenario: frame interval must be positive");
    if (noise_amplitude < 0 || noise_amplitude > 255)
      throw InputError("scenario: noise amplitude out of range");
    for (int c : background)
      if (c < 0 || c > 255) throw InputError("scenario: background color out of range");
    for (std::size_t i = 0; i < actors.size(); ++i) {
      const auto& a = actors[i];
      std::string name = "actor " + std::to_string(i + 1);
      if (a.size <= 0.0) throw InputError("scenario: " + name + ": size must be positive");
      if (a.waypoints.empty()) throw InputError("scenario: " + name + ": needs a path");
      if (a.entry < 1 || a.exit > frame_count || a.entry > a.exit)
        throw InputError("scenario: " + name + ": entry/exit outside 1..frames");
      for (int c : a.color)
        if (c < 0 || c > 255) throw InputError("scenario: " + name + ": color out of range");
      for (const auto& [h0, h1] : a.hide)
        if (h0 > h1) throw InputError("scenario: " + name + ": bad hide range");
    }
  }
};

/// Per-actor true centroid positions for every slice where the actor is
/// drawn. The mapping to tracker pedestrian numbers is the scorer's job.
struct GroundTruth {
  struct ActorTruth {
    std::map<int, Vec2> position;  // slice -> unrounded center
  };
  std::vector<ActorTruth> actors;
  double frame_interval = 1.0;
};

struct RenderResult {
  ImageStack stack;
  GroundTruth truth;
};

namespace detail {

inline void paint_actor(ColorImage& frame, const ActorSpec& actor, const Vec2& center) {
  const double r = actor.size;
  int x0 = std::max(0, static_cast<int>(std::floor(center.x - r)));
  int x1 = std::min(frame.width() - 1, static_cast<int>(std::ceil(center.x + r)));
  int y0 = std::max(0, static_cast<int>(std::floor(center.y - r)));
  int y1 = std::min(frame.height() - 1, static_cast<int>(std::ceil(center.y + r)));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      double dx = x - center.x, dy = y - center.y;
      bool inside = actor.shape == ActorSpec::Shape::Disk
                        ? dx * dx + dy * dy <= r * r
                        : std::abs(dx) <= r && std::abs(dy) <= r;
      if (!inside) continue;
      frame.r.at(x, y) = static_cast<std::uint8_t>(actor.color[0]);
      frame.g.at(x, y) = static_cast<std::uint8_t>(actor.color[1]);
      frame.b.at(x, y) = static_cast<std::uint8_t>(actor.color[2]);
    }
  }
}

}  // namespace detail

/// Deterministic render: background fill, actors painted in listed order
/// (later actors on top), then seeded bounded noise.
inline RenderResult render_scenario(const Scenario& scenario) {
  scenario.validate();

  RenderResult out;
  out.stack.frame_interval_seconds = scenario.frame_interval;
  out.truth.frame_interval = scenario.frame_interval;
  out.truth.actors.resize(scenario.actors.size());

  std::mt19937 rng(scenario.seed);
  const int amp = scenario.noise_amplitude;

  for (int t = 1; t <= scenario.frame_count; ++t) {
    ColorImage frame(scenario.width, scenario.height);
    std::fill(frame.r.data.begin(), frame.r.data.end(),
              static_cast<std::uint8_t>(scenario.background[0]));
    std::fill(frame.g.data.begin(), frame.g.data.end(),
              static_cast<std::uint8_t>(scenario.background[1]));
    std::fill(frame.b.data.begin(), frame.b.data.end(),
              static_cast<std::uint8_t>(scenario.background[2]));

    for (std::size_t i = 0; i < scenario.actors.size(); ++i) {
      const auto& actor = scenario.actors[i];
      if (!actor.present_at(t)) continue;
      Vec2 center = actor.position_at(t);
      detail::paint_actor(frame, actor, center);
      out.truth.actors[i].position[t] = center;
    }

    if (amp > 0) {
      // Raw engine draws keep the noise reproducible across platforms.
      const unsigned span = static_cast<unsigned>(2 * amp + 1);
      for (int c = 0; c < 3; ++c) {
        auto& plane = frame.channel(c).data;
        for (auto& v : plane) {
          int delta = static_cast<int>(rng() % span) - amp;
          v = static_cast<std::uint8_t>(std::clamp(static_cast<int>(v) + delta, 0, 255));
        }
      }
    }
    out.stack.frames.push_back(std::move(frame));
  }
  return out;
}

inline constexpr const char* kTruthHeader = "Actor, T, X, Y";

inline void write_truth(std::ostream& out, const GroundTruth& truth,
                        const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << "\n";
  out << kTruthHeader << "\n";
  for (std::size_t i = 0; i < truth.actors.size(); ++i)
    for (const auto& [t, pos] : truth.actors[i].position)
      out << (i + 1) << ", " << t << ", " << fmt_num(pos.x) << ", " << fmt_num(pos.y) << "\n";
}

inline void write_truth(const std::string& path, const GroundTruth& truth,
                        const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw InputError(path + ": cannot open for writing");
  write_truth(out, truth, comment);
  if (!out) throw std::runtime_error(path + ": write failed");
}

inline GroundTruth read_truth(std::istream& in, const std::string& path) {
  GroundTruth truth;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (!header_seen) {
      if (std::string(t) != kTruthHeader)
        throw InputError(path + ": expected header '" + std::string(kTruthHeader) + "'");
      header_seen = true;
      continue;
    }
    auto f = split(t, ',');
    if (f.size() != 4) throw InputError(path + ": expected 4 fields per truth row");
    int actor = parse_int(f[0], path);
    if (actor < 1) throw InputError(path + ": actor numbers start at 1");
    if (static_cast<std::size_t>(actor) > truth.actors.size())
      truth.actors.resize(static_cast<std::size_t>(actor));
    truth.actors[actor - 1].position[parse_int(f[1], path)] = {parse_double(f[2], path),
                                                               parse_double(f[3], path)};
  }
  if (!header_seen) throw InputError(path + ": missing header line");
  return truth;
}

inline GroundTruth read_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  return read_truth(in, path);
}

struct TrackMatch {
  int actor = 0;       // 1-based truth actor
  int pedestrian = 0;  // tracker pedestrian number
  int overlap = 0;     // slices scored
  double mean_dist = 0.0;
  bool covered = false;  // track spans every slice the actor is present
};

struct ScoreReport {
  int actor_count = 0;
  int track_count = 0;
  int matched = 0;
  double identity_rate = 0.0;  // percent of actors covered by one track
  double rms_error = 0.0;      // per-frame centroid error over matches
  int false_positives = 0;     // tracks matching no actor
  int false_negatives = 0;     // actors matched by no track
  std::vector<TrackMatch> matches;
};

/// Greedy truth-to-output correspondence: candidate pairs must overlap in
/// time and stay within match_radius on average; pairs are consumed in
/// order of summed centroid distance. Expects NTXY in the same coordinate
/// frame as the truth (image pixels).
inline ScoreReport score_tracking(const std::vector<NtxyRecord>& records,
                                  const GroundTruth& truth, double match_radius) {
  std::map<int, std::map<int, Vec2>> tracks;  // pedestrian -> slice -> position
  for (const auto& r : records) tracks[r.pedestrian_number][r.time] = {r.x, r.y};

  ScoreReport report;
  report.actor_count = static_cast<int>(truth.actors.size());
  report.track_count = static_cast<int>(tracks.size());

  struct Pair {
    int actor;
    int pedestrian;
    int overlap;
    double sum_dist;
    double max_dist;
    bool covered;
  };
  std::vector<Pair> pairs;
  for (std::size_t a = 0; a < truth.actors.size(); ++a) {
    for (const auto& [ped, positions] : tracks) {
      Pair p{static_cast<int>(a) + 1, ped, 0, 0.0, 0.0, true};
      for (const auto& [t, true_pos] : truth.actors[a].position) {
        auto it = positions.find(t);
        if (it == positions.end()) {
          p.covered = false;
          continue;
        }
        double d = distance(it->second, true_pos);
        p.overlap += 1;
        p.sum_dist += d;
        p.max_dist = std::max(p.max_dist, d);
      }
      if (p.overlap == 0) continue;
      if (p.sum_dist / p.overlap > match_radius) continue;
      if (p.max_dist > match_radius) p.covered = false;
      pairs.push_back(p);
    }
  }

  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.sum_dist != b.sum_dist) return a.sum_dist < b.sum_dist;
    if (a.actor != b.actor) return a.actor < b.actor;
    return a.pedestrian < b.pedestrian;
  });

  std::vector<bool> actor_used(truth.actors.size(), false);
  std::map<int, bool> ped_used;
  for (const auto& [ped, positions] : tracks) ped_used[ped] = false;

  double sq_sum = 0.0;
  int scored = 0, covered_count = 0;
  for (const auto& p : pairs) {
    if (actor_used[static_cast<std::size_t>(p.actor - 1)] || ped_used[p.pedestrian]) continue;
    actor_used[static_cast<std::size_t>(p.actor - 1)] = true;
    ped_used[p.pedestrian] = true;

    TrackMatch m;
    m.actor = p.actor;
    m.pedestrian = p.pedestrian;
    m.overlap = p.overlap;
    m.mean_dist = p.sum_dist / p.overlap;
    m.covered = p.covered;
    report.matches.push_back(m);
    if (p.covered) ++covered_count;

    const auto& positions = tracks[p.pedestrian];
    for (const auto& [t, true_pos] : truth.actors[static_cast<std::size_t>(p.actor - 1)].position) {
      auto it = positions.find(t);
      if (it == positions.end()) continue;
      double d = distance(it->second, true_pos);
      sq_sum += d * d;
      ++scored;
    }
  }

  report.matched = static_cast<int>(report.matches.size());
  report.false_negatives = report.actor_count - report.matched;
  report.false_positives = report.track_count - report.matched;
  report.identity_rate = report.actor_count > 0
                             ? 100.0 * covered_count / report.actor_count
                             : 100.0;
  report.rms_error = scored > 0 ? std::sqrt(sq_sum / scored) : 0.0;
  return report;
}

inline void write_score_report(std::ostream& out, const ScoreReport& report,
                               const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << "\n";
  out << "Actors, Tracks, Matched, IdentityRate, RmsError, FalsePositives, FalseNegatives\n";
  out << report.actor_count << ", " << report.track_count << ", " << report.matched << ", "
      << fmt_num(report.identity_rate) << ", " << fmt_num(report.rms_error) << ", "
      << report.false_positives << ", " << report.false_negatives << "\n";
  out << "Actor, PedNum, Overlap, MeanDist, Covered\n";
  for (const auto& m : report.matches)
    out << m.actor << ", " << m.pedestrian << ", " << m.overlap << ", " << fmt_num(m.mean_dist)
        << ", " << (m.covered ? 1 : 0) << "\n";
}

inline void write_score_report(const std::string& path, const ScoreReport& report,
                               const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw InputError(path + ": cannot open for writing");
  write_score_report(out, report, comment);
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace pedtrack
