#pragma once

#include "cinewild/camera.hpp"
#include "cinewild/geometry.hpp"
#include "cinewild/types.hpp"

namespace cinewild {

// Disturbance model of the filmed animal: concentric distance bands plus a
// pinhole model of the animal's own eye.
struct EthicsParams {
  double caution_dist{20.0};      // m; outer band edge, only a decaying tail beyond
  double safety_dist{5.0};        // m; inner band edge, steepest penalty inside
  double visibility_range{12.0};  // m; the animal can notice the drone inside this
  double caution_gain{0.1};       // curvature of the outer band
  double safety_gain{1.0};        // curvature of the inner band
  Intrinsics eye{};               // animal eye camera (focal fixed per species)
};

struct CostWeights {
  double proximity{0};
  double visibility{0};
  double smoothness{0};
  double framing{0};
  double distance{0};     // pose: distance tracking
  double orientation{0};  // pose: relative-orientation tracking
};

// Desired shot.  `anchor_px` is where the subject position should project;
// when subject_height_px > 0 the framing term instead places two keypoints
// (subject position +/- subject_height_m/2 along world Z) a span of
// subject_height_px pixels apart, centred on the anchor, which couples the
// focal length to subject screen presence.
struct ShotObjective {
  PixelPoint anchor_px{480, 270};
  double subject_height_m{0};
  double subject_height_px{0};
  double desired_distance{0};                        // m
  Rotation desired_relative{Rotation::Identity()};   // desired (gimbal^T * heading)^T
  bool use_distance{false};
  bool use_orientation{false};
};

struct CostBreakdown {
  double proximity{0};
  double visibility{0};
  double smoothness{0};
  double framing{0};
  double pose{0};

  double total() const {
    return proximity + visibility + smoothness + framing + pose;
  }
};

// Framing penalty applied when a required keypoint falls behind the lens,
// scaled by the framing weight.
inline constexpr double kBehindLensPenalty = 1e6;

// The drone's filming rig: fixed sensor/principal point, focal supplied by
// the camera state at evaluation time.
struct FilmCamera {
  SensorSpec sensor{};
  double center_u{480};
  double center_v{270};
  double skew{0};

  Intrinsics at_focal(double focal_mm) const;
};

// Distance-band penalty.  Piecewise in distance with value-continuous
// seams: exponential tail beyond caution_dist, quadratic bands inside,
// strictly decreasing up to caution_dist.
double proximity_cost(double dist, const EthicsParams& e, double gain);

// Penalty for being seen.  Inside the animal's image and closer than
// visibility_range the cost peaks on the optical axis and falls off with
// normalized distance from the image centre; outside the image bounds,
// beyond visibility_range, or behind the animal's head it is zero.
double visibility_cost(const DroneState& drone, const TargetState& target,
                       const EthicsParams& e, double gain);

double smoothness_cost(const Vec3& accel, double gain);

// Squared pixel error between a projected point and its desired position.
double framing_cost(const PixelPoint& actual, const PixelPoint& desired,
                    double gain);

// Distance and relative-orientation tracking, each gated by the objective.
// The orientation residual is the (unsquared) Frobenius distance between
// the transposed relative rotation and its desired value.
double pose_cost(double dist, const Rotation& relative, const ShotObjective& obj,
                 double w_distance, double w_orientation);

// Full per-stage cost of one simulated state/input pair.
CostBreakdown stage_cost(const DroneState& drone, const CameraState& camera,
                         const TargetState& target, const DroneInput& input,
                         const ShotObjective& obj, const CostWeights& w,
                         const EthicsParams& ethics, const FilmCamera& film);

// Signed yaw of the orientation error, measured as the yaw of
// relative^T * desired^T (zero when the orientation objective is met).
double orientation_yaw_error(const Rotation& relative, const Rotation& desired);

}  // namespace cinewild
