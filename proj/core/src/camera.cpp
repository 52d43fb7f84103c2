#include "cinewild/camera.hpp"

#include <cmath>

namespace cinewild {

Intrinsics Intrinsics::centered(const SensorSpec& s, double focal_mm) {
  Intrinsics intr;
  intr.sensor = s;
  intr.focal_mm = focal_mm;
  intr.center_u = s.width_px / 2.0;
  intr.center_v = s.height_px / 2.0;
  intr.skew = 0;
  return intr;
}

Vec3 relative_position_in_frame(const Rotation& frame, const Vec3& origin,
                                const Vec3& point) {
  return frame.transpose() * (point - origin);
}

std::optional<PixelPoint> project(const Intrinsics& intr, const Vec3& p_body) {
  const double depth = p_body.x();
  if (depth <= kDepthEpsilon) return std::nullopt;
  // Optical axes from the body frame: Z_opt = X_body (forward),
  // X_opt = -Y_body (image right), Y_opt = -Z_body (image down).
  const double x_over_z = -p_body.y() / depth;
  const double y_over_z = -p_body.z() / depth;
  PixelPoint px;
  px.u = intr.pixels_per_mm_x() * intr.focal_mm * x_over_z +
         intr.skew * y_over_z + intr.center_u;
  px.v = intr.pixels_per_mm_y() * intr.focal_mm * y_over_z + intr.center_v;
  return px;
}

FovAngles fov(const Intrinsics& intr) {
  FovAngles a;
  a.horizontal_rad = 2.0 * std::atan(intr.sensor.width_mm / (2.0 * intr.focal_mm));
  a.vertical_rad = 2.0 * std::atan(intr.sensor.height_mm / (2.0 * intr.focal_mm));
  return a;
}

bool visible(const Intrinsics& intr, const Vec3& p_body, double max_range) {
  if (p_body.norm() >= max_range) return false;
  const auto px = project(intr, p_body);
  if (!px) return false;
  return px->u >= 0 && px->u <= intr.sensor.width_px && px->v >= 0 &&
         px->v <= intr.sensor.height_px;
}

}  // namespace cinewild
