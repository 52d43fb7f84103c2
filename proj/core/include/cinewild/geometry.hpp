#pragma once

#include <Eigen/Core>

namespace cinewild {

// Frame conventions used throughout:
//  * world frame: right-handed, Z up
//  * body frames (drone gimbal, animal heading): X forward, Y left, Z up
//  * a Rotation maps body coordinates into world coordinates; its columns
//    are the body axes expressed in world coordinates
using Vec3 = Eigen::Vector3d;
using Rotation = Eigen::Matrix3d;

// Euler triple in radians.  Composition is yaw about world Z, then pitch
// about Y, then roll about X:  R = Rz(yaw) * Ry(pitch) * Rx(roll).
struct EulerAngles {
  double roll{0};
  double pitch{0};
  double yaw{0};
};

// Wraps an angle into the canonical range (-pi, pi].
double wrap_angle(double a);

// Componentwise wrap_angle.
EulerAngles wrap_angles(const EulerAngles& e);

Rotation euler_to_rotation(const EulerAngles& e);

// Orientation of frame `b` as seen from frame `a`:  R_a^T * R_b.
Rotation relative_rotation(const Rotation& r_a, const Rotation& r_b);

double distance(const Vec3& a, const Vec3& b);

// Orthonormal with determinant +1, within `tol` per entry.
bool is_valid_rotation(const Rotation& r, double tol = 1e-9);

// Heading (Z-axis turn) applied by `r` to the body X axis: atan2(r10, r00).
double yaw_of(const Rotation& r);

}  // namespace cinewild
