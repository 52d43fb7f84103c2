#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "cinewild/geometry.hpp"

using namespace cinewild;

TEST_CASE("wrap_angle maps into (-pi, pi]") {
  CHECK(wrap_angle(0.0) == doctest::Approx(0.0));
  CHECK(wrap_angle(M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(-M_PI) == doctest::Approx(M_PI));  // -pi is excluded
  CHECK(wrap_angle(3 * M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(2 * M_PI + 0.25) == doctest::Approx(0.25));
  CHECK(wrap_angle(-7.5) == doctest::Approx(-7.5 + 2 * M_PI).epsilon(1e-12));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> big(-50, 50);
  for (int i = 0; i < 1000; ++i) {
    const double a = big(rng);
    const double w = wrap_angle(a);
    CHECK(w > -M_PI);
    CHECK(w <= M_PI);
    CHECK(std::remainder(a - w, 2 * M_PI) == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("euler_to_rotation matches the elementary-rotation composition") {
  // One frozen spot value, derived independently.
  const Rotation r = euler_to_rotation({0.3, -0.4, 1.2});
  CHECK(r(0, 0) == doctest::Approx(0.33375359352293837).epsilon(1e-14));
  CHECK(r(0, 1) == doctest::Approx(-0.9321114368715927).epsilon(1e-14));
  CHECK(r(0, 2) == doctest::Approx(0.14063003969173843).epsilon(1e-14));
  CHECK(r(1, 0) == doctest::Approx(0.85846484697051395).epsilon(1e-14));
  CHECK(r(1, 1) == doctest::Approx(0.23891360517243102).epsilon(1e-14));
  CHECK(r(1, 2) == doctest::Approx(-0.45382639387700202).epsilon(1e-14));
  CHECK(r(2, 0) == doctest::Approx(0.38941834230865052).epsilon(1e-14));
  CHECK(r(2, 1) == doctest::Approx(0.2721921352954314).epsilon(1e-14));
  CHECK(r(2, 2) == doctest::Approx(0.87992317628125705).epsilon(1e-14));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  for (int i = 0; i < 200; ++i) {
    const double roll = ang(rng), pitch = ang(rng), yaw = ang(rng);
    const Rotation a = euler_to_rotation({roll, pitch, yaw});
    const Rotation b = oracles::euler_zyx(roll, pitch, yaw);
    CHECK((a - b).norm() == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("rotations are orthonormal with determinant +1") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  for (int i = 0; i < 10000; ++i) {
    const Rotation r = euler_to_rotation({ang(rng), ang(rng), ang(rng)});
    CHECK(is_valid_rotation(r));
    CHECK((r * r.transpose() - Rotation::Identity()).cwiseAbs().maxCoeff() <
          1e-12);
    CHECK(r.determinant() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("relative_rotation of a frame with itself is the identity") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  for (int i = 0; i < 500; ++i) {
    const Rotation r = euler_to_rotation({ang(rng), ang(rng), ang(rng)});
    CHECK((relative_rotation(r, r) - Rotation::Identity()).cwiseAbs().maxCoeff() <
          1e-9);
  }
}

TEST_CASE("relative_rotation recovers the frozen relative yaw") {
  const Rotation a = euler_to_rotation({0, 0, 0.4});
  const Rotation b = euler_to_rotation({0, 0, 1.1});
  CHECK(yaw_of(relative_rotation(a, b)) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("distance is a metric on random triples") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> c(-100, 100);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 a(c(rng), c(rng), c(rng)), b(c(rng), c(rng), c(rng)),
        d(c(rng), c(rng), c(rng));
    CHECK(distance(a, b) >= 0);
    CHECK(distance(a, b) == doctest::Approx(distance(b, a)));
    CHECK(distance(a, d) <= distance(a, b) + distance(b, d) + 1e-9);
    CHECK(distance(a, a) == doctest::Approx(0.0));
  }
  CHECK(distance(Vec3(1, 2, 3), Vec3(4, -2, 3)) == doctest::Approx(5.0));
}

TEST_CASE("yaw_of reads back the yaw of a yaw-only rotation") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ang(-M_PI + 1e-6, M_PI);
  for (int i = 0; i < 500; ++i) {
    const double y = ang(rng);
    CHECK(yaw_of(euler_to_rotation({0, 0, y})) == doctest::Approx(y).epsilon(1e-12));
  }
}
