#include <catch2/catch.hpp>

#include <random>
#include <sstream>

#include "pedtrack/metrics.hpp"

using namespace pedtrack;

namespace {

const TrapConfig kTrap{Rect{0.0, 0.0, 10.0, 20.0}};

std::vector<NtxyRecord> line_records(int ped, int t0, int n, Vec2 start, Vec2 step) {
  std::vector<NtxyRecord> records;
  for (int i = 0; i < n; ++i)
    records.push_back({ped, t0 + i, start.x + step.x * i, start.y + step.y * i});
  return records;
}

Track make_track(int ped, int t0, std::vector<Vec2> points, double theta_seconds = 1.0) {
  Track track;
  track.pedestrian_number = ped;
  for (std::size_t i = 0; i < points.size(); ++i)
    track.observations.push_back({ped, t0 + static_cast<int>(i), points[i].x, points[i].y});
  track.t_in = t0;
  track.t_out = t0 + static_cast<int>(points.size()) - 1;
  track.rho = static_cast<int>(points.size());
  track.theta_seconds = theta_seconds;
  return track;
}

}  // namespace

TEST_CASE("build_tracks") {
  SECTION("records inside the trap keep their grouping") {
    auto records = line_records(1, 1, 5, {1, 1}, {0, 1});
    auto more = line_records(2, 3, 4, {5, 2}, {0, 2});
    records.insert(records.end(), more.begin(), more.end());
    auto tracks = build_tracks(records, kTrap, 1.0);
    REQUIRE(tracks.size() == 2);
    REQUIRE(tracks[0].pedestrian_number == 1);
    REQUIRE(tracks[0].rho == 5);
    REQUIRE(tracks[1].rho == 4);
  }
  SECTION("a pedestrian entirely outside the trap produces no track") {
    auto tracks = build_tracks(line_records(1, 1, 5, {50, 50}, {1, 0}), kTrap, 1.0);
    REQUIRE(tracks.empty());
  }
  SECTION("entry and exit bound the kept run") {
    // inside the trap only for slices 5..9
    std::vector<NtxyRecord> records;
    for (int t = 3; t <= 11; ++t) {
      double y = (t >= 5 && t <= 9) ? 10.0 : 50.0;
      records.push_back({1, t, 5.0, y});
    }
    auto tracks = build_tracks(records, kTrap, 1.0);
    REQUIRE(tracks.size() == 1);
    REQUIRE(tracks[0].t_in == 5);
    REQUIRE(tracks[0].t_out == 9);
    REQUIRE(tracks[0].rho == 5);
  }
  SECTION("the longest contiguous in-trap run wins") {
    std::vector<NtxyRecord> records;
    for (int t = 1; t <= 2; ++t) records.push_back({1, t, 1.0, 1.0});
    records.push_back({1, 3, 99.0, 99.0});  // leaves the trap
    for (int t = 4; t <= 8; ++t) records.push_back({1, t, 2.0, 2.0});
    auto tracks = build_tracks(records, kTrap, 1.0);
    REQUIRE(tracks.size() == 1);
    REQUIRE(tracks[0].t_in == 4);
    REQUIRE(tracks[0].t_out == 8);
  }
  SECTION("single-observation runs are dropped") {
    std::vector<NtxyRecord> records{{1, 1, 1.0, 1.0}};
    REQUIRE(build_tracks(records, kTrap, 1.0).empty());
  }
}

TEST_CASE("individual_speed") {
  SECTION("constant velocity of one unit per slice") {
    auto track = make_track(1, 1, {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5},
                                   {0, 6}, {0, 7}, {0, 8}, {0, 9}});
    REQUIRE(individual_speed(track) == Approx(1.0));
  }
  SECTION("stationary pedestrian has zero speed") {
    auto track = make_track(1, 1, {{3, 3}, {3, 3}, {3, 3}});
    REQUIRE(individual_speed(track) == Approx(0.0));
  }
  SECTION("zigzag path over half-second slices") {
    auto track = make_track(1, 1, {{0, 0}, {1, 0}, {1, 1}, {2, 1}}, 0.5);
    REQUIRE(individual_speed(track) == Approx(2.0));  // path 3 over 1.5 s
  }
  SECTION("one observation is an error") {
    Track track = make_track(1, 1, {{0, 0}, {1, 1}});
    track.observations.resize(1);
    track.rho = 1;
    REQUIRE_THROWS_AS(individual_speed(track), std::invalid_argument);
  }
  SECTION("speed is translation invariant and scale equivariant") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<Vec2> points;
      for (int i = 0; i < 6; ++i)
        points.push_back({static_cast<double>(rng() % 50) / 5.0,
                          static_cast<double>(rng() % 50) / 5.0});
      auto base = individual_speed(make_track(1, 1, points));

      std::vector<Vec2> shifted, scaled;
      for (const auto& p : points) {
        shifted.push_back({p.x + 12.5, p.y - 3.25});
        scaled.push_back({p.x * 4.0, p.y * 4.0});
      }
      REQUIRE(individual_speed(make_track(1, 1, shifted)) == Approx(base));
      REQUIRE(individual_speed(make_track(1, 1, scaled)) == Approx(base * 4.0));
    }
  }
}

TEST_CASE("headway_series") {
  SECTION("two pedestrians five units apart") {
    auto a = make_track(1, 1, {{0, 0}, {0, 0}});
    auto b = make_track(2, 1, {{3, 4}, {3, 4}});
    std::vector<Track> all{a, b};
    auto ha = headway_series(a, all);
    auto hb = headway_series(b, all);
    REQUIRE(ha.size() == 2);
    REQUIRE(ha[0].second == Approx(5.0));
    REQUIRE(hb[0].second == Approx(5.0));  // symmetric for the pair
  }
  SECTION("lone pedestrian has an empty series") {
    auto a = make_track(1, 1, {{0, 0}, {1, 1}});
    REQUIRE(headway_series(a, {a}).empty());
  }
  SECTION("minimum over the other pedestrians") {
    auto a = make_track(1, 1, {{0, 0}, {0, 0}});
    auto b = make_track(2, 1, {{1, 0}, {1, 0}});
    auto c = make_track(3, 1, {{5, 0}, {5, 0}});
    auto series = headway_series(a, {a, b, c});
    REQUIRE(series[0].second == Approx(1.0));
  }
  SECTION("times without overlap are omitted") {
    auto a = make_track(1, 1, {{0, 0}, {0, 1}, {0, 2}, {0, 3}});
    auto b = make_track(2, 3, {{1, 0}, {1, 1}});  // present at t=3,4
    auto series = headway_series(a, {a, b});
    REQUIRE(series.size() == 2);
    REQUIRE(series[0].first == 3);
    REQUIRE(series[1].first == 4);
  }
}

TEST_CASE("flow_report") {
  SECTION("flow rate divides kappa by the interval in seconds") {
    std::vector<Track> tracks;
    for (int ped = 1; ped <= 6; ++ped)
      tracks.push_back(make_track(ped, 5, {{1.0 * ped, 1}, {1.0 * ped, 2}, {1.0 * ped, 3}}));
    auto report = flow_report(tracks, kTrap, 1, 31, 1.0);  // 30 slices at 1 s
    REQUIRE(report.kappa == 6);
    REQUIRE(report.flow_rate == Approx(0.2));
  }
  SECTION("time and space mean speeds") {
    std::vector<Track> tracks{
        make_track(1, 1, {{1, 1}, {1, 2}, {1, 3}}),      // speed 1
        make_track(2, 1, {{3, 1}, {3, 3}, {3, 5}}),      // speed 2
    };
    auto report = flow_report(tracks, kTrap, 1, 3, 1.0);
    REQUIRE(report.kappa == 2);
    REQUIRE(report.time_mean_speed.has_value());
    REQUIRE(*report.time_mean_speed == Approx(1.5).epsilon(1e-12));
    REQUIRE(*report.space_mean_speed == Approx(4.0 / 3.0).epsilon(1e-12));
    REQUIRE(report.zero_speed_count == 0);
  }
  SECTION("direction is the unit vector from entry to exit") {
    std::vector<Track> tracks{make_track(1, 1, {{3, 0}, {3, 2}, {3, 5}})};
    auto report = flow_report(tracks, kTrap, 1, 3, 1.0);
    REQUIRE(report.per_pedestrian[0].direction.has_value());
    REQUIRE(report.per_pedestrian[0].direction->x == Approx(0.0));
    REQUIRE(report.per_pedestrian[0].direction->y == Approx(1.0));
  }
  SECTION("stationary pedestrian: no direction, excluded from SMS") {
    std::vector<Track> tracks{make_track(1, 1, {{2, 2}, {2, 2}, {2, 2}}),
                              make_track(2, 1, {{4, 1}, {4, 2}, {4, 3}})};
    auto report = flow_report(tracks, kTrap, 1, 3, 1.0);
    REQUIRE(report.zero_speed_count == 1);
    REQUIRE(!report.per_pedestrian[0].direction.has_value());
    REQUIRE(*report.space_mean_speed == Approx(1.0));  // harmonic mean over {1}
  }
  SECTION("kappa 0 leaves speed fields undefined") {
    auto report = flow_report({}, kTrap, 1, 10, 1.0);
    REQUIRE(report.kappa == 0);
    REQUIRE(report.flow_rate == 0.0);
    REQUIRE(!report.time_mean_speed.has_value());
    REQUIRE(!report.space_mean_speed.has_value());
    REQUIRE(!report.area_module.has_value());
  }
  SECTION("area module and density are reciprocal views") {
    std::vector<Track> tracks{make_track(1, 1, {{1, 1}, {1, 2}}),
                              make_track(2, 1, {{2, 1}, {2, 2}})};
    auto report = flow_report(tracks, kTrap, 1, 2, 1.0);
    REQUIRE(*report.area_module == Approx(kTrap.area() / 2.0));
    REQUIRE(*report.density == Approx(2.0 / kTrap.area()));
  }
  SECTION("doubling the interval halves the flow rate") {
    std::vector<Track> tracks{make_track(1, 1, {{1, 1}, {1, 2}}),
                              make_track(2, 1, {{2, 1}, {2, 2}})};
    auto q1 = flow_report(tracks, kTrap, 1, 11, 1.0).flow_rate;
    auto q2 = flow_report(tracks, kTrap, 1, 21, 1.0).flow_rate;
    REQUIRE(q2 == Approx(q1 / 2.0));
  }
  SECTION("T1 >= T2 is rejected") {
    REQUIRE_THROWS_AS(flow_report({}, kTrap, 5, 5, 1.0), InputError);
  }
  SECTION("space mean speed never exceeds time mean speed") {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Track> tracks;
      int n = 2 + static_cast<int>(rng() % 5);
      for (int ped = 1; ped <= n; ++ped) {
        std::vector<Vec2> points{{5, 1}};
        int steps = 2 + static_cast<int>(rng() % 6);
        for (int i = 0; i < steps; ++i) {
          double dy = 0.1 + static_cast<double>(rng() % 20) / 10.0;  // strictly moving
          points.push_back({points.back().x, points.back().y + dy});
        }
        tracks.push_back(make_track(ped, 1, points));
      }
      auto report = flow_report(tracks, TrapConfig{Rect{0, 0, 100, 100}}, 1, 9, 1.0);
      REQUIRE(report.zero_speed_count == 0);
      REQUIRE(*report.space_mean_speed <= *report.time_mean_speed + 1e-12);
      for (const auto& p : report.per_pedestrian) {
        REQUIRE(p.direction.has_value());
        REQUIRE(p.direction->norm() == Approx(1.0));
      }
    }
  }
  SECTION("midline crossings are counted once per pedestrian") {
    // trap midline at y = 10
    std::vector<Track> tracks{
        make_track(1, 1, {{5, 8}, {5, 9.5}, {5, 10.5}, {5, 9.0}, {5, 11.0}}),  // crosses
        make_track(2, 1, {{5, 1}, {5, 2}, {5, 3}}),                            // stays below
    };
    auto report = flow_report(tracks, kTrap, 1, 5, 1.0);
    REQUIRE(report.line_crossings == 1);
  }
}

TEST_CASE("flow report file layout") {
  std::vector<Track> tracks{make_track(1, 1, {{1, 1}, {1, 2}, {1, 3}}),
                            make_track(2, 1, {{3, 1}, {3, 3}, {3, 5}})};
  auto report = flow_report(tracks, kTrap, 1, 3, 1.0);
  std::ostringstream out;
  write_flow_report(out, report, "cfg");
  std::istringstream in(out.str());
  std::string comment, header, summary, ped_header, ped1;
  std::getline(in, comment);
  std::getline(in, header);
  std::getline(in, summary);
  std::getline(in, ped_header);
  std::getline(in, ped1);
  REQUIRE(comment == "# cfg");
  REQUIRE(header.rfind("Kappa, FlowRatePerSec, TimeMeanSpeed, SpaceMeanSpeed", 0) == 0);
  REQUIRE(summary.rfind("2, ", 0) == 0);
  REQUIRE(ped_header.rfind("PedNum, Speed, DirX, DirY", 0) == 0);
  REQUIRE(ped1.rfind("1, 1, ", 0) == 0);

  std::ostringstream series;
  write_track_series(series, tracks, "cfg");
  REQUIRE(series.str().find("PedNum, T, X, Y, Speed, Headway") != std::string::npos);
}
