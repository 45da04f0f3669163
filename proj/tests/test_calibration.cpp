#include <catch2/catch.hpp>

#include <random>
#include <sstream>

#include "pedtrack/calibration.hpp"

#include "test_util.hpp"

using namespace pedtrack;

namespace {

// Reference affine used to generate exact control points.
constexpr double kU = 2.0, kV = 0.1, kW = 0.02;
constexpr double kX0 = -1.0, kY0 = 0.01, kZ0 = 0.12;

ControlPoint from_affine(double xi, double yi) {
  return {xi, yi, kU + kV * xi + kW * yi, kX0 + kY0 * xi + kZ0 * yi};
}

}  // namespace

TEST_CASE("fit_calibration") {
  SECTION("identity points give the identity transform") {
    auto cal = fit_calibration({{0, 0, 0, 0}, {1, 0, 1, 0}, {0, 1, 0, 1}});
    REQUIRE(cal.u == Approx(0.0).margin(1e-12));
    REQUIRE(cal.v == Approx(1.0));
    REQUIRE(cal.w == Approx(0.0).margin(1e-12));
    REQUIRE(cal.x0 == Approx(0.0).margin(1e-12));
    REQUIRE(cal.y0 == Approx(0.0).margin(1e-12));
    REQUIRE(cal.z0 == Approx(1.0));
    REQUIRE(cal.fit_residual == Approx(0.0).margin(1e-12));
  }

  SECTION("recovers a known affine from six generic points") {
    std::vector<ControlPoint> points{from_affine(0, 0),   from_affine(100, 10),
                                     from_affine(20, 150), from_affine(200, 200),
                                     from_affine(310, 40), from_affine(70, 230)};
    auto cal = fit_calibration(points);
    REQUIRE(cal.u == Approx(kU).margin(1e-9));
    REQUIRE(cal.v == Approx(kV).margin(1e-9));
    REQUIRE(cal.w == Approx(kW).margin(1e-9));
    REQUIRE(cal.x0 == Approx(kX0).margin(1e-9));
    REQUIRE(cal.y0 == Approx(kY0).margin(1e-9));
    REQUIRE(cal.z0 == Approx(kZ0).margin(1e-9));
    REQUIRE(cal.fit_residual < 1e-9);

    SECTION("maps the documented sample point") {
      Vec2 mapped = cal.apply(10.0, 20.0);
      REQUIRE(mapped.x == Approx(3.4).margin(1e-9));
      REQUIRE(mapped.y == Approx(1.5).margin(1e-9));
    }
  }

  SECTION("collinear image points are rejected") {
    REQUIRE_THROWS_WITH(
        fit_calibration({{0, 0, 0, 0}, {1, 1, 1, 1}, {2, 2, 2, 2}, {3, 3, 3, 3}}),
        Catch::Contains("collinear"));
  }

  SECTION("fewer than three points are rejected") {
    REQUIRE_THROWS_AS(fit_calibration({{0, 0, 0, 0}, {1, 1, 1, 1}}), InputError);
  }
}

TEST_CASE("apply_calibration") {
  std::vector<ControlPoint> points{from_affine(0, 0),  from_affine(10, 0), from_affine(0, 10),
                                   from_affine(10, 10)};
  auto cal = fit_calibration(points);

  SECTION("identity calibration leaves records unchanged") {
    Calibration identity;
    std::vector<NtxyRecord> records{{1, 1, 5.0, 6.0}, {2, 3, 7.0, 8.0}};
    auto mapped = apply_calibration(identity, records);
    REQUIRE(mapped[0].x == 5.0);
    REQUIRE(mapped[1].y == 8.0);
  }

  SECTION("empty record list stays empty") {
    REQUIRE(apply_calibration(cal, {}).empty());
  }

  SECTION("count, order, numbers and times survive the mapping") {
    std::vector<NtxyRecord> records{{3, 9, 1.0, 2.0}, {1, 4, 8.0, 0.5}};
    auto mapped = apply_calibration(cal, records);
    REQUIRE(mapped.size() == 2);
    REQUIRE(mapped[0].pedestrian_number == 3);
    REQUIRE(mapped[0].time == 9);
    REQUIRE(mapped[1].pedestrian_number == 1);
    REQUIRE(mapped[1].time == 4);
  }

  SECTION("composing with the inverse affine returns the input") {
    // invert the reference affine on the linear part
    double det = kV * kZ0 - kW * kY0;
    REQUIRE(det != 0.0);
    std::mt19937 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
      double x = static_cast<double>(rng() % 320);
      double y = static_cast<double>(rng() % 240);
      Vec2 world = cal.apply(x, y);
      double ix = (kZ0 * (world.x - kU) - kW * (world.y - kX0)) / det;
      double iy = (-kY0 * (world.x - kU) + kV * (world.y - kX0)) / det;
      REQUIRE(ix == Approx(x).margin(1e-9));
      REQUIRE(iy == Approx(y).margin(1e-9));
    }
  }
}

TEST_CASE("noisy fit keeps a small residual") {
  std::mt19937 rng(2024);
  auto noise = [&rng]() {
    return (static_cast<double>(rng() % 2001) - 1000.0) / 10000.0;  // uniform +-0.1
  };
  std::vector<ControlPoint> points;
  for (int i = 0; i < 24; ++i) {
    auto p = from_affine(static_cast<double>(rng() % 320), static_cast<double>(rng() % 240));
    p.world_x += noise();
    p.world_y += noise();
    points.push_back(p);
  }
  auto cal = fit_calibration(points);
  REQUIRE(cal.fit_residual <= 0.2);
  REQUIRE(cal.fit_residual > 0.0);
}

TEST_CASE("control point and calibration files") {
  testutil::TempDir dir;

  SECTION("control point file round trip") {
    testutil::write_file(dir.file("points.csv"),
                         "# picked by hand\n"
                         "Xi, Yi, Xr, Yr\n"
                         "0, 0, 2, -1\n"
                         "100, 10, 12.2, 0.2\n"
                         "20, 150, 7, 17.2\n");
    auto points = read_control_points(dir.file("points.csv"));
    REQUIRE(points.size() == 3);
    REQUIRE(points[1].image_x == 100.0);
    REQUIRE(points[1].world_x == 12.2);
  }

  SECTION("missing header is rejected") {
    testutil::write_file(dir.file("bad.csv"), "0, 0, 2, -1\n");
    REQUIRE_THROWS_AS(read_control_points(dir.file("bad.csv")), InputError);
  }

  SECTION("calibration file round trip") {
    Calibration cal;
    cal.u = 2.0;
    cal.v = 0.1;
    cal.w = 0.02;
    cal.x0 = -1.0;
    cal.y0 = 0.01;
    cal.z0 = 0.12;
    cal.fit_residual = 0.05;
    write_calibration(dir.file("cal.csv"), cal, "fit");
    auto back = read_calibration(dir.file("cal.csv"));
    REQUIRE(back.u == cal.u);
    REQUIRE(back.w == cal.w);
    REQUIRE(back.z0 == cal.z0);
    REQUIRE(back.fit_residual == cal.fit_residual);
  }
}

TEST_CASE("trap membership is inclusive of the boundary") {
  TrapConfig trap{Rect{0.0, 0.0, 4.0, 10.0}};
  REQUIRE(trap.contains(0.0, 0.0));
  REQUIRE(trap.contains(4.0, 10.0));
  REQUIRE(trap.contains(2.0, 5.0));
  REQUIRE(!trap.contains(4.01, 5.0));
  REQUIRE(trap.length() == Approx(10.0));
  REQUIRE(trap.area() == Approx(40.0));
}
