#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "lain/channel.hpp"
#include "lain/errors.hpp"
#include "lain/rng.hpp"

using namespace lain;
using lain::test::rel_close;

TEST_CASE("elevation angle") {
  const Position3 abs{0, 0, 200};
  CHECK(elevation_angle_deg({0, 0, 30}, abs) == doctest::Approx(90.0));
  CHECK(elevation_angle_deg({100, 0, 100}, {0, 0, 200}) == doctest::Approx(45.0));
  CHECK(elevation_angle_deg({1e9, 0, 30}, abs) < 1e-5);
  CHECK_THROWS_AS(elevation_angle_deg(abs, abs), GeometryError);
}

TEST_CASE("air-ground path loss") {
  AirGroundParams p;
  auto excess = [&](double deg) {
    return (p.zeta_los_db - p.zeta_nlos_db) /
               (1.0 + p.sigmoid_a * std::exp(-p.sigmoid_b * (deg - p.sigmoid_a))) +
           p.zeta_nlos_db;
  };
  // straight down at 1 m leaves only the free-space term plus the excess loss
  const double l1 = air_ground_pathloss_db({0, 0, 0}, {0, 0, 1}, p);
  const double fspl = l1 - excess(90.0);
  CHECK(fspl == doctest::Approx(20.0 * std::log10(4.0 * std::numbers::pi * 2.4e9 / 3e8)));
  CHECK(fspl == doctest::Approx(40.05).epsilon(1e-3));
  // at a high angle the excess loss collapses toward zeta_L
  CHECK(excess(90.0) == doctest::Approx(p.zeta_los_db).epsilon(1e-3));
  // doubling the distance at a fixed angle adds 20 log10 2
  const double a = air_ground_pathloss_db({30, 40, 0}, {0, 0, 100}, p);
  const double b = air_ground_pathloss_db({60, 80, 0}, {0, 0, 200}, p);
  CHECK(b - a == doctest::Approx(20.0 * std::log10(2.0)));
  CHECK_THROWS_AS(air_ground_pathloss_db({1, 1, 1}, {1, 1, 1}, p), GeometryError);
  // finite over a range of geometries
  Rng r(3);
  for (int i = 0; i < 200; ++i) {
    const double l = air_ground_pathloss_db({r.uniform(0, 1000), r.uniform(0, 1000), 30}, {500, 500, 200}, p);
    CHECK(std::isfinite(l));
  }
}

TEST_CASE("UAV to ABS rate") {
  AirGroundParams p;
  const Position3 u{100, 0, 30}, h{0, 0, 200};
  CHECK(rate_uav_abs(u, h, 0.0, 10e6, p, 1e-15) == 0.0);
  // constructed SNR of 3 gives log2(4) = 2 bits/s/Hz
  const double gain = db_to_linear(-air_ground_pathloss_db(u, h, p));
  const double noise = 0.1 * gain / 3.0;
  CHECK(rate_uav_abs(u, h, 0.1, 10e6, p, noise) == doctest::Approx(20e6));
  CHECK(rate_uav_abs(u, h, 0.1, 20e6, p, noise) == doctest::Approx(40e6));
  CHECK_THROWS_AS(rate_uav_abs(u, h, 0.1, 0.0, p, noise), DomainError);
}

TEST_CASE("ground gain") {
  CHECK(ground_gain({0, 0, 0}, {100, 0, 0}, 1e-4) == doctest::Approx(1e-8));
  CHECK(ground_gain({0, 0, 0}, {0, 1, 0}, 1e-4) == doctest::Approx(1e-4));
  CHECK(ground_gain({0, 0, 0}, {50, 0, 0}, 1e-4) ==
        doctest::Approx(4.0 * ground_gain({0, 0, 0}, {100, 0, 0}, 1e-4)));
  CHECK_THROWS_AS(ground_gain({1, 2, 3}, {1, 2, 3}, 1e-4), GeometryError);
}

TEST_CASE("UAV to ground-node rate") {
  GroundLinkParams g;
  g.noise_power_w = 3.98e-15;
  const double r = rate_uav_node({0, 0, 0}, {100, 0, 0}, 0.1, 10e6, g);
  CHECK(rel_close(r, 1.79e8, 5e-3));
  CHECK_THROWS_AS(rate_uav_node({0, 0, 0}, {100, 0, 0}, 0.1, 0.0, g), DomainError);
}

TEST_CASE("rates are monotone in bandwidth, power and distance") {
  GroundLinkParams g;
  AirGroundParams p;
  Rng r(21);
  for (int i = 0; i < 200; ++i) {
    const double d = r.uniform(5, 900);
    const double bw = r.uniform(1e6, 20e6);
    const double pw = r.uniform(0.01, 1.0);
    const Position3 o{0, 0, 30};
    const Position3 near{d, 0, 30}, far{d * 1.5, 0, 30};
    CHECK(rate_uav_node(o, near, pw, bw, g) > rate_uav_node(o, far, pw, bw, g));
    CHECK(rate_uav_node(o, near, pw, bw * 1.1, g) > rate_uav_node(o, near, pw, bw, g));
    CHECK(rate_uav_node(o, near, pw * 1.1, bw, g) > rate_uav_node(o, near, pw, bw, g));
    const Position3 h{0, 0, 200};
    CHECK(rate_uav_abs(near, h, pw, bw, p, g.noise_power_w) >= 0.0);
    CHECK(rate_uav_abs(near, h, pw, bw * 1.1, p, g.noise_power_w) >
          rate_uav_abs(near, h, pw, bw, p, g.noise_power_w));
    CHECK(rate_uav_abs(near, h, pw * 1.1, bw, p, g.noise_power_w) >
          rate_uav_abs(near, h, pw, bw, p, g.noise_power_w));
  }
}

TEST_CASE("unit conversions") {
  CHECK(rel_close(dbm_to_watts(-114.0), 3.98e-15, 5e-3));
  CHECK(rel_close(default_noise_power_w(), 3.98e-15, 5e-3));
  Rng r(1);
  for (int i = 0; i < 100; ++i) {
    const double x = std::exp(r.uniform(-40, 40));
    CHECK(rel_close(db_to_linear(linear_to_db(x)), x, 1e-12));
    CHECK(rel_close(dbm_to_watts(watts_to_dbm(x)), x, 1e-12));
  }
}
