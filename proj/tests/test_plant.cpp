#include <cmath>
#include <random>

#include "doctest.h"

#include "cinewild/plant.hpp"

using namespace cinewild;

namespace {

DroneState random_drone(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  DroneState d;
  d.position = Vec3(u(rng), u(rng), std::abs(u(rng)) + 1);
  d.velocity = Vec3(u(rng), u(rng), u(rng)) / 4;
  d.gimbal = {u(rng) / 10, u(rng) / 10, u(rng) / 5};
  return d;
}

DroneInput random_input(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  DroneInput in;
  in.accel = Vec3(u(rng), u(rng), u(rng));
  in.gimbal_rate = Vec3(u(rng), u(rng), u(rng)) / 3;
  return in;
}

}  // namespace

TEST_CASE("step_drone frozen value") {
  DroneState x;
  x.position = Vec3(1, 2, 3);
  x.velocity = Vec3(0.5, -1, 0.25);
  x.gimbal = {0.1, -0.2, 0.3};
  DroneInput u;
  u.accel = Vec3(1, 0, -0.5);
  u.gimbal_rate = Vec3(0.2, 0.1, -0.3);
  const DroneState y = step_drone(x, u, 0.2);
  // Position advances with the PRE-update velocity.
  CHECK((y.position - Vec3(1.1, 1.8, 3.05)).norm() == doctest::Approx(0.0));
  CHECK((y.velocity - Vec3(0.7, -1.0, 0.15)).norm() == doctest::Approx(0.0));
  CHECK(y.gimbal.roll == doctest::Approx(0.14));
  CHECK(y.gimbal.pitch == doctest::Approx(-0.18));
  CHECK(y.gimbal.yaw == doctest::Approx(0.24));
}

TEST_CASE("step_camera integrates the focal rate") {
  CameraState c;
  c.focal_mm = 40;
  const CameraState n = step_camera(c, CameraInput{12.5}, 0.2);
  CHECK(n.focal_mm == doctest::Approx(42.5));
}

TEST_CASE("gimbal angles wrap after integration") {
  DroneState x;
  x.gimbal = {0, 0, 3.1};
  DroneInput u;
  u.gimbal_rate = Vec3(0, 0, 1.0);
  const DroneState y = step_drone(x, u, 0.2);
  CHECK(y.gimbal.yaw == doctest::Approx(3.3 - 2 * M_PI));
}

TEST_CASE("stepping is linear in state and input") {
  std::mt19937_64 rng(61);
  for (int i = 0; i < 200; ++i) {
    const DroneState a = random_drone(rng, 5), b = random_drone(rng, 5);
    const DroneInput ua = random_input(rng, 2), ub = random_input(rng, 2);
    const double lam = 0.37;
    DroneState mix;
    mix.position = lam * a.position + (1 - lam) * b.position;
    mix.velocity = lam * a.velocity + (1 - lam) * b.velocity;
    mix.gimbal = {lam * a.gimbal.roll + (1 - lam) * b.gimbal.roll,
                  lam * a.gimbal.pitch + (1 - lam) * b.gimbal.pitch,
                  lam * a.gimbal.yaw + (1 - lam) * b.gimbal.yaw};
    DroneInput umix;
    umix.accel = lam * ua.accel + (1 - lam) * ub.accel;
    umix.gimbal_rate = lam * ua.gimbal_rate + (1 - lam) * ub.gimbal_rate;

    const DroneState sa = step_drone(a, ua, 0.2);
    const DroneState sb = step_drone(b, ub, 0.2);
    const DroneState sm = step_drone(mix, umix, 0.2);
    CHECK((sm.position - (lam * sa.position + (1 - lam) * sb.position)).norm() <
          1e-12);
    CHECK((sm.velocity - (lam * sa.velocity + (1 - lam) * sb.velocity)).norm() <
          1e-12);
    CHECK(sm.gimbal.pitch ==
          doctest::Approx(lam * sa.gimbal.pitch + (1 - lam) * sb.gimbal.pitch)
              .epsilon(1e-12));
  }
}

TEST_CASE("clamp_to_limits is idempotent and never grows a bounded norm") {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> big(-30, 30);
  const Limits lim;
  for (int i = 0; i < 2000; ++i) {
    DroneState d;
    d.position = Vec3(big(rng), big(rng), big(rng));
    d.velocity = Vec3(big(rng), big(rng), big(rng));
    d.gimbal = {big(rng), big(rng), big(rng)};
    CameraState c;
    c.focal_mm = big(rng) * 20;
    DroneInput ud;
    ud.accel = Vec3(big(rng), big(rng), big(rng));
    ud.gimbal_rate = Vec3(big(rng), big(rng), big(rng));
    CameraInput uc{big(rng) * 10};

    DroneState d1 = d;
    CameraState c1 = c;
    DroneInput ud1 = ud;
    CameraInput uc1 = uc;
    clamp_to_limits(d1, c1, ud1, uc1, lim);

    CHECK(d1.velocity.norm() <= lim.speed_max + 1e-12);
    CHECK(d1.velocity.norm() <= d.velocity.norm() + 1e-12);
    CHECK(ud1.accel.norm() <= lim.accel_max + 1e-12);
    CHECK(std::abs(ud1.gimbal_rate.x()) <= lim.gimbal_rate_max);
    CHECK(std::abs(ud1.gimbal_rate.y()) <= lim.gimbal_rate_max);
    CHECK(std::abs(ud1.gimbal_rate.z()) <= lim.gimbal_rate_max);
    CHECK(std::abs(uc1.focal_rate) <= lim.focal_rate_max);
    CHECK(d1.gimbal.pitch >= lim.gimbal_pitch_min);
    CHECK(d1.gimbal.pitch <= lim.gimbal_pitch_max);
    CHECK(c1.focal_mm >= lim.focal_min_mm);
    CHECK(c1.focal_mm <= lim.focal_max_mm);
    CHECK(d1.position.z() >= lim.altitude_min);

    DroneState d2 = d1;
    CameraState c2 = c1;
    DroneInput ud2 = ud1;
    CameraInput uc2 = uc1;
    clamp_to_limits(d2, c2, ud2, uc2, lim);
    CHECK((d2.position - d1.position).norm() == 0.0);
    CHECK((d2.velocity - d1.velocity).norm() == 0.0);
    CHECK(d2.gimbal.pitch == d1.gimbal.pitch);
    CHECK(d2.gimbal.yaw == d1.gimbal.yaw);
    CHECK(c2.focal_mm == c1.focal_mm);
    CHECK((ud2.accel - ud1.accel).norm() == 0.0);
    CHECK((ud2.gimbal_rate - ud1.gimbal_rate).norm() == 0.0);
    CHECK(uc2.focal_rate == uc1.focal_rate);
  }
}

TEST_CASE("clamping preserves direction of norm-capped vectors") {
  const Limits lim;
  DroneState d;
  d.position = Vec3(0, 0, 5);
  d.velocity = Vec3(30, 40, 0);  // norm 50 -> rescaled to 10
  CameraState c;
  DroneInput ud;
  ud.accel = Vec3(0, -6, 8);  // norm 10 -> rescaled to 5
  CameraInput uc{0};
  clamp_to_limits(d, c, ud, uc, lim);
  CHECK((d.velocity - Vec3(6, 8, 0)).norm() == doctest::Approx(0.0));
  CHECK((ud.accel - Vec3(0, -3, 4)).norm() == doctest::Approx(0.0));
}

TEST_CASE("forecast of a stationary target is constant") {
  TargetState t;
  t.position = Vec3(3, -1, 2);
  t.velocity = Vec3::Zero();
  t.heading = {0, 0, 1.1};
  const auto f = forecast_target(t, 0.2, 12);
  REQUIRE(f.size() == 12);
  for (const TargetState& s : f) {
    CHECK((s.position - t.position).norm() == 0.0);
    CHECK(s.heading.yaw == t.heading.yaw);
  }
}

TEST_CASE("forecast advances a moving target by (j+1) steps") {
  TargetState t;
  t.position = Vec3(0, 0, 2);
  t.velocity = Vec3(0.8, 0, 0);
  const auto f = forecast_target(t, 0.2, 10);
  REQUIRE(f.size() == 10);
  for (int j = 0; j < 10; ++j) {
    CHECK(f[j].position.x() == doctest::Approx(0.8 * 0.2 * (j + 1)));
    CHECK((f[j].velocity - t.velocity).norm() == 0.0);
  }
}
