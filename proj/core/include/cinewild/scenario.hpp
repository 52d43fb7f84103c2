#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cinewild/costs.hpp"
#include "cinewild/planner.hpp"
#include "cinewild/plant.hpp"
#include "cinewild/types.hpp"

namespace cinewild {

// Configuration problem: message carries the offending field's path.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class AnimalMotion { kStationary, kConstantVelocity, kWaypoints };

struct Waypoint {
  Vec3 position{Vec3::Zero()};
  double speed{1.0};  // m/s toward this waypoint
};

// Ground-truth animal motion.  The planner never sees this directly; it
// plans against a constant-velocity forecast of the sampled state.
struct AnimalModel {
  AnimalMotion motion{AnimalMotion::kStationary};
  TargetState initial{};
  std::vector<Waypoint> waypoints;  // used by kWaypoints only

  // Exact state at time t >= 0.  Waypoint animals travel the polyline at
  // the per-leg speeds (heading along travel) and stop at the last point.
  TargetState state_at(double t) const;
};

// One shot in the storyboard: its duration, objective and weights, plus
// optional overrides of the scenario-wide ethics bands.
struct Sequence {
  double duration{20.0};  // s
  ShotObjective objective{};
  CostWeights weights{};
  bool override_visibility_range{false};
  double visibility_range{12.0};
};

struct Scenario {
  std::string name{"scenario"};
  std::string mode{"cinewild"};  // "cinewild" or "baseline"
  SimConfig sim{};
  Limits limits{};
  EthicsParams ethics{};
  FilmCamera film{};
  SolverConfig solver{};
  AnimalModel animal{};
  DroneState drone_init{};
  CameraState camera_init{};
  std::vector<Sequence> sequences;

  double total_duration() const;
};

// Throws ConfigError naming the bad field when the scenario is unusable
// (empty storyboard, inverted bands, anchor outside the image, ...).
void validate(const Scenario& s);

// JSON round trip.  save() materializes every field, so a freshly loaded
// file re-saves byte-identically.
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);
Scenario scenario_from_json_text(const std::string& text);
std::string scenario_to_json_text(const Scenario& s);

// Desk-scale storyboards mirroring the two study setups: a walking giraffe
// filmed from behind/side/close (proximity-driven), and a stationary tiger
// whose field of view the drone must leave (visibility-driven).
Scenario experiment1_preset();
Scenario experiment2_preset();

// Same scenario with the wildlife terms disabled (proximity, visibility,
// smoothness weights zeroed in every sequence); everything else identical.
// Idempotent.
Scenario baseline_mode(const Scenario& s);

// Desired relative orientation for viewing the subject from `azimuth`
// radians around its heading (0 = from the front, pi = from behind,
// -pi/2 = from its right side).
Rotation view_from_azimuth(double azimuth);

}  // namespace cinewild
