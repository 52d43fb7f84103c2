#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "cinewild/costs.hpp"
#include "cinewild/plant.hpp"
#include "cinewild/types.hpp"

namespace cinewild {

// Everything the receding-horizon solver needs besides the current state.
struct PlanningProblem {
  ShotObjective objective{};
  CostWeights weights{};
  EthicsParams ethics{};
  FilmCamera film{};
  Limits limits{};
  double dt{0.2};
};

struct RolloutResult {
  double total{0};
  std::vector<CostBreakdown> stages;
};

// Per-channel sampling spread for the stochastic stage of the solver.  The
// solver searches deviations around a shot-holding base law (the gimbal and
// focal rates that keep the subject on the anchor at the requested extent
// while the drone flies the sampled accelerations), so these spreads size
// the exploration around that law, not around zero rates.
struct ChannelStddev {
  double accel{1.0};       // m/s^2
  double gimbal_rate{0.3}; // rad/s
  double focal_rate{10.0}; // mm/s
};

struct SolverConfig {
  int n_samples{256};
  int n_elites{32};
  int n_iterations{8};
  ChannelStddev init_stddev{};
  double stddev_decay{0.85};   // per-iteration multiplier on the sampling spread
  int refine_steps{20};
  double refine_step_size{1.0};  // initial scale of the damped-Newton descent
  // Regularizers used only inside the solver's ranking/descent objective,
  // never in any reported cost.  control_reg is a tiny quadratic on the
  // normalized deviation variables; velocity_reg penalizes the predicted
  // drone speed (fraction of speed_max, summed over the horizon) so the
  // drone brakes in translation directions the stage costs cannot rank
  // instead of coasting through them forever.  The returned plan still
  // never does worse than the zero-input rollout on the true cost
  // (enforced explicitly).
  double control_reg{1e-4};
  double velocity_reg{70.0};
  std::uint64_t seed{0};
  int n_threads{1};
};

// Diagnostics recorded by plan(); in-memory only.
struct SolverTrace {
  std::vector<double> best_internal_per_iteration;  // non-increasing
  double best_sampled_internal{0};
  double refined_internal{0};
  // Which candidate won: 0 refined, 1 best sample, 2 warm start, 3 the
  // zero-deviation hold plan (also set when the final never-worse-than-
  // zero-input guard swaps in the all-zero inputs).
  int winner{0};
};

struct Plan {
  std::vector<DroneInput> drone_inputs;
  std::vector<CameraInput> camera_inputs;
  double predicted_cost{0};
  std::vector<CostBreakdown> stage_costs;
  SolverTrace trace{};
};

// Simulates the plant under clamping and sums stage costs.  Stage k pairs
// the post-step states with the input that produced them and with forecast
// element k, so a length-N input sequence yields N stage costs.
RolloutResult rollout_cost(const PlanningProblem& prob, const DroneState& xd,
                           const CameraState& xc,
                           const std::vector<TargetState>& forecast,
                           const std::vector<DroneInput>& ud,
                           const std::vector<CameraInput>& uc);

// Central finite differences of the total rollout cost with respect to the
// flattened input sequence (per step: accel xyz, gimbal rate rpy, focal
// rate).  `step_scale` multiplies a per-channel probe size; pass 1 for the
// default.  When `high_precision` is set the two probe evaluations
// accumulate stage sums in extended precision.
Eigen::VectorXd finite_difference_gradient(
    const PlanningProblem& prob, const DroneState& xd, const CameraState& xc,
    const std::vector<TargetState>& forecast,
    const std::vector<DroneInput>& ud, const std::vector<CameraInput>& uc,
    double step_scale = 1.0, bool high_precision = false);

// Receding-horizon solve: stochastic search over input sequences (elite
// refitting, per-sample RNG streams derived from seed and sample index so
// results are independent of evaluation order and thread count), followed
// by damped diagonal-Newton descent, warm-started from `previous` when
// given (shifted one step, last step duplicated).  The returned plan never
// costs more than the zero-input rollout.
// Throws std::invalid_argument on a degenerate configuration.
Plan plan(const PlanningProblem& prob, const DroneState& xd,
          const CameraState& xc, const TargetState& target_now,
          const SimConfig& sim, const SolverConfig& solver,
          const Plan* previous = nullptr);

}  // namespace cinewild
