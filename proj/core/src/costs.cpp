#include "cinewild/costs.hpp"

#include <cmath>

namespace cinewild {

Intrinsics FilmCamera::at_focal(double focal_mm) const {
  Intrinsics intr;
  intr.sensor = sensor;
  intr.focal_mm = focal_mm;
  intr.center_u = center_u;
  intr.center_v = center_v;
  intr.skew = skew;
  return intr;
}

double proximity_cost(double dist, const EthicsParams& e, double gain) {
  if (gain == 0.0) return 0.0;
  if (dist >= e.caution_dist) {
    return gain * std::exp(-0.5 * (dist - e.caution_dist));
  }
  const double d_ac = dist - e.caution_dist;
  if (dist >= e.safety_dist) {
    return gain * (e.caution_gain * d_ac * d_ac + 1.0);
  }
  // Continuity constant: value of the middle band at the safety edge.
  const double seam = e.safety_dist - e.caution_dist;
  const double offset = e.caution_gain * seam * seam + 1.0;
  const double d_sf = dist - e.safety_dist;
  return gain * (e.safety_gain * d_sf * d_sf + offset);
}

double visibility_cost(const DroneState& drone, const TargetState& target,
                       const EthicsParams& e, double gain) {
  if (gain == 0.0) return 0.0;
  const Vec3 in_eye_frame = relative_position_in_frame(
      euler_to_rotation(target.heading), target.position, drone.position);
  if (in_eye_frame.norm() >= e.visibility_range) return 0.0;
  const auto px = project(e.eye, in_eye_frame);
  if (!px) return 0.0;  // behind the animal's head: unseen
  const double w = e.eye.sensor.width_px;
  const double h = e.eye.sensor.height_px;
  if (px->u < 0 || px->u > w || px->v < 0 || px->v > h) {
    return 0.0;  // close by, but outside the animal's field of view
  }
  // In view: peak penalty on the optical axis, easing toward the borders.
  const double du = px->u - e.eye.center_u;
  const double dv = px->v - e.eye.center_v;
  const double max_off = std::sqrt(e.eye.center_u * e.eye.center_u +
                                   e.eye.center_v * e.eye.center_v);
  const double rel = std::sqrt(du * du + dv * dv) / max_off;
  return gain * std::exp(-rel * rel);
}

double smoothness_cost(const Vec3& accel, double gain) {
  return gain * accel.squaredNorm();
}

double framing_cost(const PixelPoint& actual, const PixelPoint& desired,
                    double gain) {
  const double du = actual.u - desired.u;
  const double dv = actual.v - desired.v;
  return gain * (du * du + dv * dv);
}

double pose_cost(double dist, const Rotation& relative, const ShotObjective& obj,
                 double w_distance, double w_orientation) {
  double cost = 0;
  if (obj.use_distance && w_distance != 0.0) {
    const double err = dist - obj.desired_distance;
    cost += w_distance * err * err;
  }
  if (obj.use_orientation && w_orientation != 0.0) {
    cost += w_orientation *
            (relative.transpose() - obj.desired_relative).norm();
  }
  return cost;
}

double orientation_yaw_error(const Rotation& relative, const Rotation& desired) {
  // Error rotation taking the desired relative pose to the actual one;
  // identity (yaw 0) when the objective is met exactly.
  return yaw_of(relative.transpose() * desired.transpose());
}

namespace {

// Framing residual for one keypoint; `bad` latches when the point is
// behind the lens.
double keypoint_cost(const Intrinsics& intr, const Rotation& gimbal,
                     const Vec3& drone_pos, const Vec3& point,
                     const PixelPoint& desired, double gain, bool& bad) {
  const auto px =
      project(intr, relative_position_in_frame(gimbal, drone_pos, point));
  if (!px) {
    bad = true;
    return 0;
  }
  return framing_cost(*px, desired, gain);
}

}  // namespace

CostBreakdown stage_cost(const DroneState& drone, const CameraState& camera,
                         const TargetState& target, const DroneInput& input,
                         const ShotObjective& obj, const CostWeights& w,
                         const EthicsParams& ethics, const FilmCamera& film) {
  CostBreakdown out;
  const double dist = distance(drone.position, target.position);

  out.proximity = proximity_cost(dist, ethics, w.proximity);
  out.visibility = visibility_cost(drone, target, ethics, w.visibility);
  out.smoothness = smoothness_cost(input.accel, w.smoothness);

  const Rotation gimbal = euler_to_rotation(drone.gimbal);
  if (w.framing != 0.0) {
    const Intrinsics intr = film.at_focal(camera.focal_mm);
    bool behind = false;
    double framing = 0;
    if (obj.subject_height_px > 0 && obj.subject_height_m > 0) {
      // Two keypoints spanning the subject vertically; placing them
      // subject_height_px apart fixes the screen presence and thereby the
      // focal length.  Image v grows downward, so the head sits above the
      // anchor.
      const Vec3 half = Vec3(0, 0, obj.subject_height_m / 2.0);
      const PixelPoint head_px{obj.anchor_px.u,
                               obj.anchor_px.v - obj.subject_height_px / 2.0};
      const PixelPoint base_px{obj.anchor_px.u,
                               obj.anchor_px.v + obj.subject_height_px / 2.0};
      framing += keypoint_cost(intr, gimbal, drone.position,
                               target.position + half, head_px, w.framing,
                               behind);
      framing += keypoint_cost(intr, gimbal, drone.position,
                               target.position - half, base_px, w.framing,
                               behind);
    } else {
      framing += keypoint_cost(intr, gimbal, drone.position, target.position,
                               obj.anchor_px, w.framing, behind);
    }
    out.framing = behind ? w.framing * kBehindLensPenalty : framing;
  }

  const Rotation rel =
      relative_rotation(gimbal, euler_to_rotation(target.heading));
  out.pose = pose_cost(dist, rel, obj, w.distance, w.orientation);
  return out;
}

}  // namespace cinewild
