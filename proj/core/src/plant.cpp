#include "cinewild/plant.hpp"

#include <algorithm>
#include <cmath>

namespace cinewild {

namespace {

double clip(double x, double lo, double hi) {
  return std::min(std::max(x, lo), hi);
}

// Rescales v onto the closed ball of radius `cap` (direction preserved).
// Rounding can leave a single rescale one ulp above the cap, so iterate a
// bounded number of times; re-clamping an already clamped vector is then a
// bitwise no-op.
void cap_norm(Vec3& v, double cap) {
  for (int i = 0; i < 4 && v.squaredNorm() > cap * cap; ++i) {
    v *= cap / v.norm();
  }
}

}  // namespace

DroneState step_drone(const DroneState& x, const DroneInput& u, double dt) {
  DroneState next;
  next.position = x.position + dt * x.velocity;  // pre-update velocity
  next.velocity = x.velocity + dt * u.accel;
  next.gimbal = wrap_angles({x.gimbal.roll + dt * u.gimbal_rate.x(),
                             x.gimbal.pitch + dt * u.gimbal_rate.y(),
                             x.gimbal.yaw + dt * u.gimbal_rate.z()});
  return next;
}

CameraState step_camera(const CameraState& x, const CameraInput& u, double dt) {
  return {x.focal_mm + dt * u.focal_rate};
}

void clamp_to_limits(DroneState& xd, CameraState& xc, DroneInput& ud,
                     CameraInput& uc, const Limits& lim) {
  cap_norm(ud.accel, lim.accel_max);
  for (int i = 0; i < 3; ++i) {
    ud.gimbal_rate[i] =
        clip(ud.gimbal_rate[i], -lim.gimbal_rate_max, lim.gimbal_rate_max);
  }
  uc.focal_rate = clip(uc.focal_rate, -lim.focal_rate_max, lim.focal_rate_max);

  cap_norm(xd.velocity, lim.speed_max);
  xd.position.z() = std::max(xd.position.z(), lim.altitude_min);
  xd.gimbal.pitch = clip(xd.gimbal.pitch, lim.gimbal_pitch_min, lim.gimbal_pitch_max);
  xc.focal_mm = clip(xc.focal_mm, lim.focal_min_mm, lim.focal_max_mm);
}

std::vector<TargetState> forecast_target(const TargetState& now, double dt,
                                         int n) {
  std::vector<TargetState> out;
  out.reserve(static_cast<size_t>(std::max(n, 0)));
  TargetState s = now;
  for (int j = 0; j < n; ++j) {
    s.position += dt * s.velocity;
    out.push_back(s);
  }
  return out;
}

}  // namespace cinewild
