#pragma once

#include "cinewild/geometry.hpp"

namespace cinewild {

// Drone rigid state.  The gimbal is decoupled from the body and stored as
// Euler angles; its rotation matrix is derived on demand.
struct DroneState {
  Vec3 position{Vec3::Zero()};   // m, world
  Vec3 velocity{Vec3::Zero()};   // m/s, world
  EulerAngles gimbal{};          // rad
};

struct CameraState {
  double focal_mm{35.0};
};

struct TargetState {
  Vec3 position{Vec3::Zero()};   // m, world
  Vec3 velocity{Vec3::Zero()};   // m/s, world
  EulerAngles heading{};         // rad; X axis of this frame is the gaze axis
};

struct DroneInput {
  Vec3 accel{Vec3::Zero()};        // m/s^2, world
  Vec3 gimbal_rate{Vec3::Zero()};  // rad/s (roll, pitch, yaw)
};

struct CameraInput {
  double focal_rate{0};  // mm/s
};

}  // namespace cinewild
