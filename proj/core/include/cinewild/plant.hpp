#pragma once

#include <vector>

#include "cinewild/types.hpp"

namespace cinewild {

struct Limits {
  double speed_max{10.0};          // m/s, Euclidean norm
  double accel_max{5.0};           // m/s^2, Euclidean norm
  double gimbal_rate_max{1.5};     // rad/s, per axis
  double gimbal_pitch_min{-1.5707963267948966};  // -90 deg (straight down)
  double gimbal_pitch_max{0.5235987755982988};   // +30 deg
  double focal_min_mm{15.0};
  double focal_max_mm{300.0};
  double focal_rate_max{60.0};     // mm/s
  double altitude_min{0.5};        // m, world Z floor
};

struct SimConfig {
  double dt{0.2};   // s
  int horizon{10};  // planning steps
};

// Explicit first-order step: position advances with the pre-update
// velocity, then velocity and gimbal integrate the input.  Gimbal angles
// are wrapped to (-pi, pi].
DroneState step_drone(const DroneState& x, const DroneInput& u, double dt);

CameraState step_camera(const CameraState& x, const CameraInput& u, double dt);

// Projects states and inputs into the feasible set: velocity/acceleration
// are rescaled to their norm caps (direction preserved), gimbal rates and
// focal rate clip per component, gimbal pitch and focal length clip to
// their ranges, and the drone may not sink below altitude_min.
// Idempotent.
void clamp_to_limits(DroneState& xd, CameraState& xc, DroneInput& ud,
                     CameraInput& uc, const Limits& lim);

// Constant-velocity forecast: element j is the target state after (j+1)
// steps of dt, heading held fixed.
std::vector<TargetState> forecast_target(const TargetState& now, double dt,
                                         int n);

}  // namespace cinewild
