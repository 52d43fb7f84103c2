#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "cinewild/camera.hpp"
#include "cinewild/geometry.hpp"

using namespace cinewild;

namespace {

Intrinsics film_intrinsics(double f = 35.0) {
  return Intrinsics::centered(SensorSpec{960, 540, 36.0, 20.25}, f);
}

Intrinsics eye_intrinsics() {
  return Intrinsics::centered(SensorSpec{960, 540, 13.365, 23.76}, 35.0);
}

}  // namespace

TEST_CASE("project frozen spot values") {
  // Derived independently from the homogeneous pipeline.
  const auto film = project(film_intrinsics(), Vec3(12, -1.5, 2));
  REQUIRE(film.has_value());
  CHECK(film->u == doctest::Approx(596.66666666666663).epsilon(1e-12));
  CHECK(film->v == doctest::Approx(114.44444444444444).epsilon(1e-12));

  const auto eye = project(eye_intrinsics(), Vec3(10, 1, -0.5));
  REQUIRE(eye.has_value());
  CHECK(eye->u == doctest::Approx(228.59708193041524).epsilon(1e-12));
  CHECK(eye->v == doctest::Approx(309.77272727272725).epsilon(1e-12));
}

TEST_CASE("project matches the homogeneous 3x4 oracle over random poses") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  std::uniform_real_distribution<double> pos(-40, 40);
  std::uniform_real_distribution<double> fwd(0.5, 60);
  const Intrinsics intrs[2] = {film_intrinsics(), eye_intrinsics()};
  for (int i = 0; i < 10000; ++i) {
    const Intrinsics& intr = intrs[i % 2];
    const Rotation r = euler_to_rotation({ang(rng), ang(rng), ang(rng)});
    const Vec3 cam(pos(rng), pos(rng), pos(rng));
    // A point guaranteed in front of the camera: along body X plus jitter.
    const Vec3 body(fwd(rng), pos(rng) / 10, pos(rng) / 10);
    const Vec3 world = cam + r * body;

    const auto ours = project(intr, relative_position_in_frame(r, cam, world));
    const auto ref = oracles::project_h(intr, r, cam, world);
    REQUIRE(ours.has_value());
    REQUIRE(ref.has_value());
    CHECK(ours->u == doctest::Approx(ref->u).epsilon(1e-9));
    CHECK(std::abs(ours->u - ref->u) < 1e-6);
    CHECK(std::abs(ours->v - ref->v) < 1e-6);
  }
}

TEST_CASE("project then back-project reproduces the body direction") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> fwd(0.1, 50);
  std::uniform_real_distribution<double> lat(-20, 20);
  const Intrinsics intr = film_intrinsics(50);
  for (int i = 0; i < 2000; ++i) {
    const Vec3 p(fwd(rng), lat(rng), lat(rng));
    const auto px = project(intr, p);
    REQUIRE(px.has_value());
    // Invert the projection equations for the ray direction at unit depth.
    const double y = -(px->u - intr.center_u - intr.skew * (px->v - intr.center_v) /
                                                   (intr.pixels_per_mm_y() *
                                                    intr.focal_mm)) /
                     (intr.pixels_per_mm_x() * intr.focal_mm);
    const double z =
        -(px->v - intr.center_v) / (intr.pixels_per_mm_y() * intr.focal_mm);
    const Vec3 ray(1.0, y, z);
    CHECK((ray.normalized() - p.normalized()).norm() < 1e-9);
  }
}

TEST_CASE("points behind the lens do not project") {
  const Intrinsics intr = film_intrinsics();
  CHECK_FALSE(project(intr, Vec3(-1, 0, 0)).has_value());
  CHECK_FALSE(project(intr, Vec3(0, 2, 1)).has_value());
  CHECK_FALSE(project(intr, Vec3(1e-9, 0, 0)).has_value());
  CHECK(project(intr, Vec3(1e-3, 0, 0)).has_value());
}

TEST_CASE("visible is monotone in max_range") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> fwd(0.5, 30);
  std::uniform_real_distribution<double> lat(-5, 5);
  const Intrinsics intr = eye_intrinsics();
  for (int i = 0; i < 2000; ++i) {
    const Vec3 p(fwd(rng), lat(rng), lat(rng));
    for (double a = 2; a <= 32; a *= 2) {
      if (visible(intr, p, a)) {
        CHECK(visible(intr, p, a * 2));
        CHECK(visible(intr, p, a + 100));
      }
    }
  }
}

TEST_CASE("visible respects the range bound strictly") {
  const Intrinsics intr = film_intrinsics();
  const Vec3 p(10, 0, 0);
  CHECK(visible(intr, p, 10.5));
  CHECK_FALSE(visible(intr, p, 10.0));  // strictly-below comparison
  CHECK_FALSE(visible(intr, p, 9.0));
}

TEST_CASE("visible requires the point inside the image bounds") {
  const Intrinsics intr = film_intrinsics();
  CHECK(visible(intr, Vec3(10, 0, 0), 100));
  // Steeply off-axis: projects far outside the sensor.
  CHECK_FALSE(visible(intr, Vec3(1, 5, 0), 100));
  CHECK_FALSE(visible(intr, Vec3(1, 0, 5), 100));
  CHECK_FALSE(visible(intr, Vec3(-10, 0, 0), 100));
}

TEST_CASE("field of view shrinks strictly as focal length grows") {
  const SensorSpec s{960, 540, 36.0, 20.25};
  // Frozen: 2*atan(36/70) and 2*atan(20.25/70) at 35 mm.
  const FovAngles at35 = fov(Intrinsics::centered(s, 35));
  CHECK(at35.horizontal_rad == doctest::Approx(0.95002151253019362).epsilon(1e-12));
  CHECK(at35.vertical_rad == doctest::Approx(0.56319684356067634).epsilon(1e-12));
  double prev_h = 1e9, prev_v = 1e9;
  for (double f = 15; f <= 300; f += 5) {
    const FovAngles a = fov(Intrinsics::centered(s, f));
    CHECK(a.horizontal_rad < prev_h);
    CHECK(a.vertical_rad < prev_v);
    prev_h = a.horizontal_rad;
    prev_v = a.vertical_rad;
  }
}

TEST_CASE("relative_position_in_frame undoes the frame transform") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  std::uniform_real_distribution<double> pos(-20, 20);
  for (int i = 0; i < 500; ++i) {
    const Rotation r = euler_to_rotation({ang(rng), ang(rng), ang(rng)});
    const Vec3 origin(pos(rng), pos(rng), pos(rng));
    const Vec3 local(pos(rng), pos(rng), pos(rng));
    const Vec3 world = origin + r * local;
    CHECK((relative_position_in_frame(r, origin, world) - local).norm() <
          1e-10);
  }
}
