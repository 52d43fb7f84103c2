#pragma once

#include <optional>

#include "cinewild/geometry.hpp"

namespace cinewild {

// Forward depths at or below this are treated as behind the lens.
inline constexpr double kDepthEpsilon = 1e-6;  // m

struct SensorSpec {
  double width_px{960};
  double height_px{540};
  double width_mm{36.0};
  double height_mm{20.25};
};

struct PixelPoint {
  double u{0};
  double v{0};
};

// Pinhole camera.  Pixel pitch comes from the physical sensor size; `skew`
// couples image y into u (zero for all presets, kept for completeness).
struct Intrinsics {
  SensorSpec sensor{};
  double focal_mm{35.0};
  double center_u{480};
  double center_v{270};
  double skew{0};

  double pixels_per_mm_x() const { return sensor.width_px / sensor.width_mm; }
  double pixels_per_mm_y() const { return sensor.height_px / sensor.height_mm; }

  // Principal point at the sensor centre.
  static Intrinsics centered(const SensorSpec& s, double focal_mm);
};

// Expresses `point` in the frame anchored at `origin` with orientation
// `frame` (body-to-world):  frame^T * (point - origin).
Vec3 relative_position_in_frame(const Rotation& frame, const Vec3& origin,
                                const Vec3& point);

// Projects a body-frame point (X forward, Y left, Z up) onto the image.
// The optical axis is body X; u grows along body -Y, v along body -Z:
//   u = cu + px_x * f * (-y/x) + skew * (-z/x)
//   v = cv + px_y * f * (-z/x)
// Returns nullopt when the point is behind the lens (x <= kDepthEpsilon).
std::optional<PixelPoint> project(const Intrinsics& intr, const Vec3& p_body);

struct FovAngles {
  double horizontal_rad{0};
  double vertical_rad{0};
};

// Angular field of view from the physical sensor size: 2*atan(size/(2f)).
FovAngles fov(const Intrinsics& intr);

// True when `p_body` lands inside [0,W]x[0,H] with positive forward depth
// and its straight-line distance is strictly below `max_range`.
bool visible(const Intrinsics& intr, const Vec3& p_body, double max_range);

}  // namespace cinewild
