#include "cinewild/harness.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

#include "cinewild/csvio.hpp"
#include "cinewild/planner.hpp"

namespace cinewild {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// splitmix64 finalizer; gives every control step its own solver seed while
// keeping the whole run a pure function of (scenario, seed).
std::uint64_t step_seed(std::uint64_t run_seed, int k) {
  std::uint64_t z = run_seed +
                    0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(k) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

PixelPoint as_pixel(const std::optional<PixelPoint>& p) {
  return p ? *p : PixelPoint{kNaN, kNaN};
}

}  // namespace

std::vector<StepRecord> run(const Scenario& scenario, std::uint64_t seed) {
  validate(scenario);
  const double dt = scenario.sim.dt;

  // Storyboard boundaries in steps, rounded once from the cumulative
  // durations so late sequences do not drift.
  std::vector<long> seq_end_step;
  double cum = 0;
  for (const Sequence& seq : scenario.sequences) {
    cum += seq.duration;
    seq_end_step.push_back(std::lround(cum / dt));
  }
  const long total_steps = seq_end_step.back();

  DroneState drone = scenario.drone_init;
  CameraState camera = scenario.camera_init;
  {
    DroneInput u0;
    CameraInput c0;
    clamp_to_limits(drone, camera, u0, c0, scenario.limits);
  }

  std::vector<StepRecord> records;
  records.reserve(static_cast<size_t>(total_steps));
  Plan prev;
  bool have_prev = false;
  size_t seq_idx = 0;

  for (long k = 0; k < total_steps; ++k) {
    while (k >= seq_end_step[seq_idx]) ++seq_idx;
    const Sequence& seq = scenario.sequences[seq_idx];

    EthicsParams ethics = scenario.ethics;
    if (seq.override_visibility_range)
      ethics.visibility_range = seq.visibility_range;

    PlanningProblem prob;
    prob.objective = seq.objective;
    prob.weights = seq.weights;
    prob.ethics = ethics;
    prob.film = scenario.film;
    prob.limits = scenario.limits;
    prob.dt = dt;

    SolverConfig solver = scenario.solver;
    solver.seed = step_seed(seed, static_cast<int>(k));

    const TargetState animal_now = scenario.animal.state_at(k * dt);
    const Plan p = plan(prob, drone, camera, animal_now, scenario.sim, solver,
                        have_prev ? &prev : nullptr);

    // Apply the first input through exactly the plant the planner assumed.
    DroneInput u = p.drone_inputs.front();
    CameraInput cu = p.camera_inputs.front();
    clamp_to_limits(drone, camera, u, cu, scenario.limits);
    drone = step_drone(drone, u, dt);
    camera = step_camera(camera, cu, dt);
    {
      DroneInput z0;
      CameraInput z1;
      clamp_to_limits(drone, camera, z0, z1, scenario.limits);
    }
    prev = p;
    have_prev = true;

    const TargetState animal = scenario.animal.state_at((k + 1) * dt);
    const Rotation gimbal_rot = euler_to_rotation(drone.gimbal);
    const Rotation heading_rot = euler_to_rotation(animal.heading);

    StepRecord r;
    r.k = static_cast<int>(k);
    r.t = (k + 1) * dt;
    r.drone_pos = drone.position;
    r.drone_vel = drone.velocity;
    r.gimbal = drone.gimbal;
    r.focal_mm = camera.focal_mm;
    r.target_pos = animal.position;
    r.heading = animal.heading;
    r.dist = distance(drone.position, animal.position);
    r.subject_px = as_pixel(
        project(scenario.film.at_focal(camera.focal_mm),
                relative_position_in_frame(gimbal_rot, drone.position,
                                           animal.position)));
    const Vec3 drone_in_eye = relative_position_in_frame(
        heading_rot, animal.position, drone.position);
    r.drone_in_eye_px = as_pixel(project(ethics.eye, drone_in_eye));
    r.inside_fov = visible(ethics.eye, drone_in_eye, ethics.visibility_range);
    r.framing_err_u = r.subject_px.u - seq.objective.anchor_px.u;
    r.framing_err_v = r.subject_px.v - seq.objective.anchor_px.v;
    r.yaw_err = orientation_yaw_error(
        relative_rotation(gimbal_rot, heading_rot),
        seq.objective.desired_relative);
    r.accel_norm = u.accel.norm();
    r.speed = drone.velocity.norm();
    r.cost = stage_cost(drone, camera, animal, u, seq.objective, seq.weights,
                        ethics, scenario.film);
    r.sequence_index = static_cast<int>(seq_idx);
    r.visibility_range = ethics.visibility_range;
    r.eye_center_u = ethics.eye.center_u;
    r.eye_diag_px = std::hypot(ethics.eye.sensor.width_px,
                               ethics.eye.sensor.height_px);
    records.push_back(r);
  }
  return records;
}

namespace {

struct Accumulator {
  double sum{0};
  int n{0};
  void add(double x) {
    if (std::isnan(x)) return;
    sum += x;
    ++n;
  }
  double mean() const { return n ? sum / n : 0.0; }
};

SummaryStats stats_over(const std::vector<StepRecord>& records, int seq_index) {
  SummaryStats s;
  Accumulator dist, focal, fu, fv, accel, speed, prox, yaw, eye;
  int gated = 0, inside = 0;
  for (const StepRecord& r : records) {
    if (seq_index >= 0 && r.sequence_index != seq_index) continue;
    ++s.steps;
    dist.add(r.dist);
    focal.add(r.focal_mm);
    fu.add(std::fabs(r.framing_err_u));
    fv.add(std::fabs(r.framing_err_v));
    accel.add(r.accel_norm);
    speed.add(r.speed);
    prox.add(r.cost.proximity);
    if (r.dist < r.visibility_range) {
      ++gated;
      if (r.inside_fov) ++inside;
      yaw.add(r.yaw_err);
      // Drone behind the animal's head: count it as maximally off-axis
      // rather than dropping the sample.
      const double off = std::isnan(r.drone_in_eye_px.u)
                             ? r.eye_diag_px
                             : std::fabs(r.drone_in_eye_px.u - r.eye_center_u);
      eye.add(off);
    }
  }
  s.mean_dist = dist.mean();
  s.mean_focal = focal.mean();
  s.mean_abs_framing_u = fu.mean();
  s.mean_abs_framing_v = fv.mean();
  s.mean_accel = accel.mean();
  s.mean_speed = speed.mean();
  s.mean_proximity_cost = prox.mean();
  s.gated_steps = gated;
  s.pct_inside_fov = gated ? 100.0 * inside / gated : 0.0;
  s.mean_yaw_err = yaw.mean();
  s.mean_eye_offset_px = eye.mean();
  return s;
}

nlohmann::json stats_to_json(const SummaryStats& s) {
  return nlohmann::json{{"steps", s.steps},
                        {"mean_dist", s.mean_dist},
                        {"mean_focal", s.mean_focal},
                        {"mean_abs_framing_u", s.mean_abs_framing_u},
                        {"mean_abs_framing_v", s.mean_abs_framing_v},
                        {"mean_accel", s.mean_accel},
                        {"mean_speed", s.mean_speed},
                        {"mean_proximity_cost", s.mean_proximity_cost},
                        {"gated_steps", s.gated_steps},
                        {"pct_inside_fov", s.pct_inside_fov},
                        {"mean_yaw_err", s.mean_yaw_err},
                        {"mean_eye_offset_px", s.mean_eye_offset_px}};
}

}  // namespace

RunSummary summarize(const std::vector<StepRecord>& records,
                     const Scenario& scenario, std::uint64_t seed) {
  if (records.empty())
    throw std::invalid_argument("summarize: no records");
  RunSummary out;
  out.scenario = scenario.name;
  out.mode = scenario.mode;
  out.seed = seed;
  out.overall = stats_over(records, -1);
  double cum = 0;
  for (size_t i = 0; i < scenario.sequences.size(); ++i) {
    out.per_sequence.push_back(stats_over(records, static_cast<int>(i)));
    cum += scenario.sequences[i].duration;
    out.sequence_ends.push_back(cum);
  }
  out.caution_dist = scenario.ethics.caution_dist;
  out.safety_dist = scenario.ethics.safety_dist;
  out.visibility_range = scenario.ethics.visibility_range;
  out.eye_width_px = scenario.ethics.eye.sensor.width_px;
  return out;
}

std::string summary_to_json_text(const RunSummary& s) {
  nlohmann::json j;
  j["scenario"] = s.scenario;
  j["mode"] = s.mode;
  j["seed"] = s.seed;
  j["overall"] = stats_to_json(s.overall);
  nlohmann::json per = nlohmann::json::array();
  for (const SummaryStats& q : s.per_sequence) per.push_back(stats_to_json(q));
  j["per_sequence"] = per;
  j["sequence_ends"] = s.sequence_ends;
  j["caution_dist"] = s.caution_dist;
  j["safety_dist"] = s.safety_dist;
  j["visibility_range"] = s.visibility_range;
  j["eye_width_px"] = s.eye_width_px;
  return j.dump(2) + "\n";
}

void save_summary(const RunSummary& s, const std::string& path) {
  write_file_atomic(path, summary_to_json_text(s));
}

Aggregate aggregate(const std::vector<double>& xs) {
  Aggregate a;
  if (xs.empty()) return a;
  double sum = 0;
  for (double x : xs) sum += x;
  a.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0;
    for (double x : xs) ss += (x - a.mean) * (x - a.mean);
    a.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return a;
}

}  // namespace cinewild
