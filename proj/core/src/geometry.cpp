#include "cinewild/geometry.hpp"

#include <cmath>

#include <Eigen/LU>  // determinant()

namespace cinewild {

double wrap_angle(double a) {
  // Shift so the wrap reduces to fmod, then map the [-pi, pi) result of the
  // shifted remainder onto (-pi, pi].
  double w = std::fmod(a + M_PI, 2.0 * M_PI);
  if (w < 0) w += 2.0 * M_PI;
  w -= M_PI;               // now in [-pi, pi)
  if (w == -M_PI) w = M_PI;
  return w;
}

EulerAngles wrap_angles(const EulerAngles& e) {
  return {wrap_angle(e.roll), wrap_angle(e.pitch), wrap_angle(e.yaw)};
}

Rotation euler_to_rotation(const EulerAngles& e) {
  const double cr = std::cos(e.roll), sr = std::sin(e.roll);
  const double cp = std::cos(e.pitch), sp = std::sin(e.pitch);
  const double cy = std::cos(e.yaw), sy = std::sin(e.yaw);
  // R = Rz(yaw) * Ry(pitch) * Rx(roll), written out.
  Rotation r;
  r << cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr,
       sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr,
       -sp,     cp * sr,                cp * cr;
  return r;
}

Rotation relative_rotation(const Rotation& r_a, const Rotation& r_b) {
  return r_a.transpose() * r_b;
}

double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

bool is_valid_rotation(const Rotation& r, double tol) {
  const Rotation should_be_identity = r.transpose() * r;
  if ((should_be_identity - Rotation::Identity()).cwiseAbs().maxCoeff() > tol)
    return false;
  return std::abs(r.determinant() - 1.0) <= tol;
}

double yaw_of(const Rotation& r) { return std::atan2(r(1, 0), r(0, 0)); }

}  // namespace cinewild
