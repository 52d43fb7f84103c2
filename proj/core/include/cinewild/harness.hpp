#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cinewild/scenario.hpp"

namespace cinewild {

// One executed control step.  Pixel fields are NaN when the relevant point
// fell behind the lens.  The trailing fields are context for summaries and
// are not serialized.
struct StepRecord {
  int k{0};
  double t{0};
  Vec3 drone_pos{Vec3::Zero()};
  Vec3 drone_vel{Vec3::Zero()};
  EulerAngles gimbal{};
  double focal_mm{0};
  Vec3 target_pos{Vec3::Zero()};
  EulerAngles heading{};
  double dist{0};                  // drone-to-target distance
  PixelPoint subject_px{};         // subject in the drone image
  PixelPoint drone_in_eye_px{};    // drone in the animal eye image
  bool inside_fov{false};          // strictly visible to the animal
  double framing_err_u{0};         // subject_px - anchor
  double framing_err_v{0};
  double yaw_err{0};               // signed orientation yaw error
  double accel_norm{0};            // applied input
  double speed{0};                 // post-step velocity norm
  CostBreakdown cost{};

  // --- context (not in the CSV schema) ---
  int sequence_index{0};
  double visibility_range{0};      // band active at this step
  double eye_center_u{0};
  double eye_diag_px{0};
};

// Aggregates over one slice of a run.  Pixel means skip NaN samples; the
// visibility block is computed over steps with dist < visibility_range
// ("gated"), with the drone-in-eye horizontal offset clipped to the image
// diagonal when the drone is behind the animal.
struct SummaryStats {
  int steps{0};
  double mean_dist{0};
  double mean_focal{0};
  double mean_abs_framing_u{0};
  double mean_abs_framing_v{0};
  double mean_accel{0};
  double mean_speed{0};
  double mean_proximity_cost{0};
  int gated_steps{0};              // steps with dist < visibility_range
  double pct_inside_fov{0};        // share of gated steps visible, 0..100
  double mean_yaw_err{0};          // over gated steps, signed
  double mean_eye_offset_px{0};    // |drone_in_eye.u - eye centre|, gated
};

struct RunSummary {
  std::string scenario;
  std::string mode;
  std::uint64_t seed{0};
  SummaryStats overall{};
  std::vector<SummaryStats> per_sequence;
  std::vector<double> sequence_ends;  // s, cumulative storyboard boundaries
  // Scenario context copied through so plots regenerated from the CSV plus
  // this sidecar can draw the band thresholds.
  double caution_dist{0};
  double safety_dist{0};
  double visibility_range{0};
  double eye_width_px{0};
};

// Closed loop: replan each step from the live states, apply the first
// input through the clamped plant, log.  Deterministic for a fixed
// (scenario, seed); planner worker threads never change the result.
std::vector<StepRecord> run(const Scenario& scenario, std::uint64_t seed);

// Throws std::invalid_argument on an empty record list.
RunSummary summarize(const std::vector<StepRecord>& records,
                     const Scenario& scenario, std::uint64_t seed);

std::string summary_to_json_text(const RunSummary& s);
void save_summary(const RunSummary& s, const std::string& path);

// Mean and sample standard deviation of a metric across runs.
struct Aggregate {
  double mean{0};
  double stddev{0};
};
Aggregate aggregate(const std::vector<double>& xs);

}  // namespace cinewild
