#include "cinewild/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "cinewild/csvio.hpp"

namespace cinewild {

using nlohmann::json;

namespace {

// ---- reading helpers: missing fields take defaults, unknown keys are
// rejected so typos cannot silently fall back ------------------------------

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError(path + ": unknown field '" + item.key() + "'");
  }
}

double num_or(const json& j, const char* key, double def,
              const std::string& path) {
  if (!j.contains(key)) return def;
  if (!j[key].is_number())
    throw ConfigError(path + "." + key + ": expected a number");
  return j[key].get<double>();
}

int int_or(const json& j, const char* key, int def, const std::string& path) {
  if (!j.contains(key)) return def;
  if (!j[key].is_number_integer())
    throw ConfigError(path + "." + key + ": expected an integer");
  return j[key].get<int>();
}

std::uint64_t uint_or(const json& j, const char* key, std::uint64_t def,
                      const std::string& path) {
  if (!j.contains(key)) return def;
  if (!j[key].is_number_unsigned() && !j[key].is_number_integer())
    throw ConfigError(path + "." + key + ": expected a non-negative integer");
  return j[key].get<std::uint64_t>();
}

bool bool_or(const json& j, const char* key, bool def, const std::string& path) {
  if (!j.contains(key)) return def;
  if (!j[key].is_boolean())
    throw ConfigError(path + "." + key + ": expected a boolean");
  return j[key].get<bool>();
}

std::string str_or(const json& j, const char* key, const std::string& def,
                   const std::string& path) {
  if (!j.contains(key)) return def;
  if (!j[key].is_string())
    throw ConfigError(path + "." + key + ": expected a string");
  return j[key].get<std::string>();
}

Vec3 vec3_or(const json& j, const char* key, const Vec3& def,
             const std::string& path) {
  if (!j.contains(key)) return def;
  const json& a = j[key];
  if (!a.is_array() || a.size() != 3 || !a[0].is_number() ||
      !a[1].is_number() || !a[2].is_number())
    throw ConfigError(path + "." + key + ": expected [x, y, z]");
  return Vec3(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
}

EulerAngles euler_or(const json& j, const char* key, const EulerAngles& def,
                     const std::string& path) {
  const Vec3 v = vec3_or(j, key, Vec3(def.roll, def.pitch, def.yaw), path);
  return {v.x(), v.y(), v.z()};
}

Rotation rotation_or(const json& j, const char* key, const Rotation& def,
                     const std::string& path) {
  if (!j.contains(key)) return def;
  const json& m = j[key];
  if (!m.is_array() || m.size() != 3)
    throw ConfigError(path + "." + key + ": expected a 3x3 matrix");
  Rotation r;
  for (int i = 0; i < 3; ++i) {
    const json& row = m[static_cast<size_t>(i)];
    if (!row.is_array() || row.size() != 3)
      throw ConfigError(path + "." + key + ": expected a 3x3 matrix");
    for (int c = 0; c < 3; ++c) {
      if (!row[static_cast<size_t>(c)].is_number())
        throw ConfigError(path + "." + key + ": expected numeric entries");
      r(i, c) = row[static_cast<size_t>(c)].get<double>();
    }
  }
  return r;
}

json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }
json to_json(const EulerAngles& e) {
  return json::array({e.roll, e.pitch, e.yaw});
}
json to_json(const Rotation& r) {
  json m = json::array();
  for (int i = 0; i < 3; ++i)
    m.push_back(json::array({r(i, 0), r(i, 1), r(i, 2)}));
  return m;
}

SensorSpec sensor_from(const json& j, const std::string& path) {
  check_keys(j, path, {"width_px", "height_px", "width_mm", "height_mm"});
  SensorSpec s;
  s.width_px = num_or(j, "width_px", s.width_px, path);
  s.height_px = num_or(j, "height_px", s.height_px, path);
  s.width_mm = num_or(j, "width_mm", s.width_mm, path);
  s.height_mm = num_or(j, "height_mm", s.height_mm, path);
  return s;
}

json sensor_to(const SensorSpec& s) {
  return json{{"width_px", s.width_px},
              {"height_px", s.height_px},
              {"width_mm", s.width_mm},
              {"height_mm", s.height_mm}};
}

Intrinsics intrinsics_from(const json& j, const std::string& path,
                           const Intrinsics& def) {
  check_keys(j, path, {"sensor", "focal_mm", "center_u", "center_v", "skew"});
  Intrinsics intr = def;
  if (j.contains("sensor")) intr.sensor = sensor_from(j["sensor"], path + ".sensor");
  intr.focal_mm = num_or(j, "focal_mm", def.focal_mm, path);
  intr.center_u = num_or(j, "center_u", def.center_u, path);
  intr.center_v = num_or(j, "center_v", def.center_v, path);
  intr.skew = num_or(j, "skew", def.skew, path);
  return intr;
}

json intrinsics_to(const Intrinsics& intr) {
  return json{{"sensor", sensor_to(intr.sensor)},
              {"focal_mm", intr.focal_mm},
              {"center_u", intr.center_u},
              {"center_v", intr.center_v},
              {"skew", intr.skew}};
}

AnimalMotion motion_from_name(const std::string& name, const std::string& path) {
  if (name == "stationary") return AnimalMotion::kStationary;
  if (name == "constant_velocity") return AnimalMotion::kConstantVelocity;
  if (name == "waypoints") return AnimalMotion::kWaypoints;
  throw ConfigError(path + ".motion: unknown motion '" + name + "'");
}

std::string motion_name(AnimalMotion m) {
  switch (m) {
    case AnimalMotion::kStationary: return "stationary";
    case AnimalMotion::kConstantVelocity: return "constant_velocity";
    case AnimalMotion::kWaypoints: return "waypoints";
  }
  return "stationary";
}

}  // namespace

TargetState AnimalModel::state_at(double t) const {
  t = std::max(t, 0.0);
  TargetState s = initial;
  switch (motion) {
    case AnimalMotion::kStationary:
      s.velocity = Vec3::Zero();
      return s;
    case AnimalMotion::kConstantVelocity:
      s.position += t * s.velocity;
      return s;
    case AnimalMotion::kWaypoints:
      break;
  }
  // Walk the polyline until the remaining time runs out inside a leg.
  Vec3 prev = initial.position;
  double remaining = t;
  for (const Waypoint& wp : waypoints) {
    const Vec3 leg = wp.position - prev;
    const double len = leg.norm();
    const double leg_time = len / wp.speed;
    const Vec3 dir = leg / len;
    if (remaining < leg_time) {
      s.position = prev + dir * (wp.speed * remaining);
      s.velocity = dir * wp.speed;
      s.heading = {0, 0, std::atan2(dir.y(), dir.x())};
      return s;
    }
    remaining -= leg_time;
    prev = wp.position;
    s.heading = {0, 0, std::atan2(dir.y(), dir.x())};
  }
  s.position = prev;  // parked at the final waypoint
  s.velocity = Vec3::Zero();
  return s;
}

double Scenario::total_duration() const {
  double sum = 0;
  for (const Sequence& s : sequences) sum += s.duration;
  return sum;
}

Rotation view_from_azimuth(double azimuth) {
  // The desired relative pose is the gimbal orientation expressed in the
  // subject's heading frame.  A camera at azimuth az (heading frame) that
  // looks back at the subject has yaw az + pi in that frame, so the target
  // matrix is Rz(az + pi); behind (az = pi) gives the identity.
  return euler_to_rotation({0, 0, wrap_angle(azimuth + M_PI)});
}

void validate(const Scenario& s) {
  if (s.mode != "cinewild" && s.mode != "baseline")
    throw ConfigError("mode: must be 'cinewild' or 'baseline'");
  if (s.sim.dt <= 0) throw ConfigError("sim.dt: must be positive");
  if (s.sim.horizon < 1) throw ConfigError("sim.horizon: must be >= 1");

  const Limits& l = s.limits;
  if (l.speed_max <= 0 || l.accel_max <= 0 || l.gimbal_rate_max <= 0 ||
      l.focal_rate_max <= 0)
    throw ConfigError("limits: rate/magnitude caps must be positive");
  if (l.focal_min_mm <= 0 || l.focal_max_mm <= l.focal_min_mm)
    throw ConfigError("limits.focal_min_mm/focal_max_mm: need 0 < min < max");
  if (l.gimbal_pitch_min >= l.gimbal_pitch_max)
    throw ConfigError("limits.gimbal_pitch_min: must be below gimbal_pitch_max");

  const EthicsParams& e = s.ethics;
  if (e.safety_dist <= 0 || e.caution_dist <= e.safety_dist)
    throw ConfigError("ethics: need 0 < safety_dist < caution_dist");
  if (e.visibility_range <= 0)
    throw ConfigError("ethics.visibility_range: must be positive");
  if (e.caution_gain < 0 || e.safety_gain < 0)
    throw ConfigError("ethics: band gains must be non-negative");
  if (e.eye.focal_mm <= 0 || e.eye.sensor.width_px <= 0 ||
      e.eye.sensor.height_px <= 0 || e.eye.sensor.width_mm <= 0 ||
      e.eye.sensor.height_mm <= 0)
    throw ConfigError("ethics.eye: degenerate eye camera");

  if (s.film.sensor.width_px <= 0 || s.film.sensor.height_px <= 0 ||
      s.film.sensor.width_mm <= 0 || s.film.sensor.height_mm <= 0)
    throw ConfigError("film.sensor: degenerate film sensor");
  if (s.camera_init.focal_mm < l.focal_min_mm ||
      s.camera_init.focal_mm > l.focal_max_mm)
    throw ConfigError("camera_init.focal_mm: outside focal limits");
  if (s.drone_init.position.z() < l.altitude_min)
    throw ConfigError("drone_init.position: below altitude_min");

  const SolverConfig& sol = s.solver;
  if (sol.n_samples < 2) throw ConfigError("solver.n_samples: must be >= 2");
  if (sol.n_elites < 1 || sol.n_elites > sol.n_samples)
    throw ConfigError("solver.n_elites: must be in [1, n_samples]");
  if (sol.n_iterations < 1)
    throw ConfigError("solver.n_iterations: must be >= 1");
  if (sol.init_stddev.accel <= 0 || sol.init_stddev.gimbal_rate <= 0 ||
      sol.init_stddev.focal_rate <= 0)
    throw ConfigError("solver.init_stddev: must be positive");
  if (sol.stddev_decay <= 0 || sol.stddev_decay > 1)
    throw ConfigError("solver.stddev_decay: must be in (0, 1]");
  if (sol.refine_steps < 0)
    throw ConfigError("solver.refine_steps: must be >= 0");
  if (sol.refine_step_size <= 0)
    throw ConfigError("solver.refine_step_size: must be positive");
  if (sol.control_reg < 0)
    throw ConfigError("solver.control_reg: must be >= 0");
  if (sol.velocity_reg < 0)
    throw ConfigError("solver.velocity_reg: must be >= 0");
  if (sol.n_threads < 1) throw ConfigError("solver.n_threads: must be >= 1");

  if (s.sequences.empty()) throw ConfigError("sequences: at least one required");
  for (size_t i = 0; i < s.sequences.size(); ++i) {
    const std::string path = "sequences[" + std::to_string(i) + "]";
    const Sequence& seq = s.sequences[i];
    if (seq.duration <= 0) throw ConfigError(path + ".duration: must be positive");
    const CostWeights& w = seq.weights;
    if (w.proximity < 0 || w.visibility < 0 || w.smoothness < 0 ||
        w.framing < 0 || w.distance < 0 || w.orientation < 0)
      throw ConfigError(path + ".weights: must be non-negative");
    const ShotObjective& o = seq.objective;
    if (o.anchor_px.u < 0 || o.anchor_px.u > s.film.sensor.width_px ||
        o.anchor_px.v < 0 || o.anchor_px.v > s.film.sensor.height_px)
      throw ConfigError(path + ".objective.anchor_px: outside the film image");
    if (o.subject_height_m < 0 || o.subject_height_px < 0)
      throw ConfigError(path + ".objective: subject extents must be >= 0");
    if ((o.subject_height_px > 0) != (o.subject_height_m > 0))
      throw ConfigError(path +
                        ".objective: subject_height_m and subject_height_px "
                        "must be set together");
    if (o.use_distance && o.desired_distance <= 0)
      throw ConfigError(path + ".objective.desired_distance: must be positive");
    if (!is_valid_rotation(o.desired_relative, 1e-9))
      throw ConfigError(path + ".objective.desired_relative: not a rotation");
    if (seq.override_visibility_range && seq.visibility_range <= 0)
      throw ConfigError(path + ".visibility_range: must be positive");
  }

  const AnimalModel& a = s.animal;
  if (a.motion == AnimalMotion::kWaypoints) {
    if (a.waypoints.empty())
      throw ConfigError("animal.waypoints: required for waypoint motion");
    Vec3 prev = a.initial.position;
    for (size_t i = 0; i < a.waypoints.size(); ++i) {
      const std::string path = "animal.waypoints[" + std::to_string(i) + "]";
      if (a.waypoints[i].speed <= 0)
        throw ConfigError(path + ".speed: must be positive");
      if ((a.waypoints[i].position - prev).norm() < 1e-9)
        throw ConfigError(path + ".position: coincides with the previous point");
      prev = a.waypoints[i].position;
    }
  }
}

Scenario scenario_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("not valid JSON: ") + e.what());
  }
  check_keys(j, "$",
             {"name", "mode", "sim", "limits", "ethics", "film", "solver",
              "animal", "drone_init", "camera_init", "sequences"});

  Scenario s;
  s.name = str_or(j, "name", s.name, "$");
  s.mode = str_or(j, "mode", s.mode, "$");

  if (j.contains("sim")) {
    const json& js = j["sim"];
    check_keys(js, "sim", {"dt", "horizon"});
    s.sim.dt = num_or(js, "dt", s.sim.dt, "sim");
    s.sim.horizon = int_or(js, "horizon", s.sim.horizon, "sim");
  }
  if (j.contains("limits")) {
    const json& jl = j["limits"];
    check_keys(jl, "limits",
               {"speed_max", "accel_max", "gimbal_rate_max", "gimbal_pitch_min",
                "gimbal_pitch_max", "focal_min_mm", "focal_max_mm",
                "focal_rate_max", "altitude_min"});
    Limits& l = s.limits;
    l.speed_max = num_or(jl, "speed_max", l.speed_max, "limits");
    l.accel_max = num_or(jl, "accel_max", l.accel_max, "limits");
    l.gimbal_rate_max = num_or(jl, "gimbal_rate_max", l.gimbal_rate_max, "limits");
    l.gimbal_pitch_min = num_or(jl, "gimbal_pitch_min", l.gimbal_pitch_min, "limits");
    l.gimbal_pitch_max = num_or(jl, "gimbal_pitch_max", l.gimbal_pitch_max, "limits");
    l.focal_min_mm = num_or(jl, "focal_min_mm", l.focal_min_mm, "limits");
    l.focal_max_mm = num_or(jl, "focal_max_mm", l.focal_max_mm, "limits");
    l.focal_rate_max = num_or(jl, "focal_rate_max", l.focal_rate_max, "limits");
    l.altitude_min = num_or(jl, "altitude_min", l.altitude_min, "limits");
  }
  if (j.contains("ethics")) {
    const json& je = j["ethics"];
    check_keys(je, "ethics",
               {"caution_dist", "safety_dist", "visibility_range",
                "caution_gain", "safety_gain", "eye"});
    EthicsParams& e = s.ethics;
    e.caution_dist = num_or(je, "caution_dist", e.caution_dist, "ethics");
    e.safety_dist = num_or(je, "safety_dist", e.safety_dist, "ethics");
    e.visibility_range = num_or(je, "visibility_range", e.visibility_range, "ethics");
    e.caution_gain = num_or(je, "caution_gain", e.caution_gain, "ethics");
    e.safety_gain = num_or(je, "safety_gain", e.safety_gain, "ethics");
    if (je.contains("eye")) e.eye = intrinsics_from(je["eye"], "ethics.eye", e.eye);
  }
  if (j.contains("film")) {
    const json& jf = j["film"];
    check_keys(jf, "film", {"sensor", "center_u", "center_v", "skew"});
    if (jf.contains("sensor"))
      s.film.sensor = sensor_from(jf["sensor"], "film.sensor");
    s.film.center_u = num_or(jf, "center_u", s.film.center_u, "film");
    s.film.center_v = num_or(jf, "center_v", s.film.center_v, "film");
    s.film.skew = num_or(jf, "skew", s.film.skew, "film");
  }
  if (j.contains("solver")) {
    const json& js = j["solver"];
    check_keys(js, "solver",
               {"n_samples", "n_elites", "n_iterations", "init_stddev",
                "stddev_decay", "refine_steps", "refine_step_size",
                "control_reg", "velocity_reg", "seed", "n_threads"});
    SolverConfig& sol = s.solver;
    sol.n_samples = int_or(js, "n_samples", sol.n_samples, "solver");
    sol.n_elites = int_or(js, "n_elites", sol.n_elites, "solver");
    sol.n_iterations = int_or(js, "n_iterations", sol.n_iterations, "solver");
    if (js.contains("init_stddev")) {
      const json& jd = js["init_stddev"];
      check_keys(jd, "solver.init_stddev", {"accel", "gimbal_rate", "focal_rate"});
      sol.init_stddev.accel =
          num_or(jd, "accel", sol.init_stddev.accel, "solver.init_stddev");
      sol.init_stddev.gimbal_rate = num_or(jd, "gimbal_rate",
                                           sol.init_stddev.gimbal_rate,
                                           "solver.init_stddev");
      sol.init_stddev.focal_rate = num_or(jd, "focal_rate",
                                          sol.init_stddev.focal_rate,
                                          "solver.init_stddev");
    }
    sol.stddev_decay = num_or(js, "stddev_decay", sol.stddev_decay, "solver");
    sol.refine_steps = int_or(js, "refine_steps", sol.refine_steps, "solver");
    sol.refine_step_size =
        num_or(js, "refine_step_size", sol.refine_step_size, "solver");
    sol.control_reg = num_or(js, "control_reg", sol.control_reg, "solver");
    sol.velocity_reg = num_or(js, "velocity_reg", sol.velocity_reg, "solver");
    sol.seed = uint_or(js, "seed", sol.seed, "solver");
    sol.n_threads = int_or(js, "n_threads", sol.n_threads, "solver");
  }
  if (j.contains("animal")) {
    const json& ja = j["animal"];
    check_keys(ja, "animal", {"motion", "initial", "waypoints"});
    s.animal.motion = motion_from_name(
        str_or(ja, "motion", motion_name(s.animal.motion), "animal"), "animal");
    if (ja.contains("initial")) {
      const json& ji = ja["initial"];
      check_keys(ji, "animal.initial", {"position", "velocity", "heading"});
      s.animal.initial.position =
          vec3_or(ji, "position", s.animal.initial.position, "animal.initial");
      s.animal.initial.velocity =
          vec3_or(ji, "velocity", s.animal.initial.velocity, "animal.initial");
      s.animal.initial.heading =
          euler_or(ji, "heading", s.animal.initial.heading, "animal.initial");
    }
    if (ja.contains("waypoints")) {
      const json& jw = ja["waypoints"];
      if (!jw.is_array()) throw ConfigError("animal.waypoints: expected an array");
      for (size_t i = 0; i < jw.size(); ++i) {
        const std::string path = "animal.waypoints[" + std::to_string(i) + "]";
        check_keys(jw[i], path, {"position", "speed"});
        Waypoint wp;
        wp.position = vec3_or(jw[i], "position", wp.position, path);
        wp.speed = num_or(jw[i], "speed", wp.speed, path);
        s.animal.waypoints.push_back(wp);
      }
    }
  }
  if (j.contains("drone_init")) {
    const json& jd = j["drone_init"];
    check_keys(jd, "drone_init", {"position", "velocity", "gimbal"});
    s.drone_init.position =
        vec3_or(jd, "position", s.drone_init.position, "drone_init");
    s.drone_init.velocity =
        vec3_or(jd, "velocity", s.drone_init.velocity, "drone_init");
    s.drone_init.gimbal = euler_or(jd, "gimbal", s.drone_init.gimbal, "drone_init");
  }
  if (j.contains("camera_init")) {
    const json& jc = j["camera_init"];
    check_keys(jc, "camera_init", {"focal_mm"});
    s.camera_init.focal_mm = num_or(jc, "focal_mm", s.camera_init.focal_mm,
                                    "camera_init");
  }
  if (j.contains("sequences")) {
    const json& jq = j["sequences"];
    if (!jq.is_array()) throw ConfigError("sequences: expected an array");
    for (size_t i = 0; i < jq.size(); ++i) {
      const std::string path = "sequences[" + std::to_string(i) + "]";
      const json& je = jq[i];
      check_keys(je, path,
                 {"duration", "weights", "objective",
                  "override_visibility_range", "visibility_range"});
      Sequence seq;
      seq.duration = num_or(je, "duration", seq.duration, path);
      if (je.contains("weights")) {
        const json& jw = je["weights"];
        check_keys(jw, path + ".weights",
                   {"proximity", "visibility", "smoothness", "framing",
                    "distance", "orientation"});
        CostWeights& w = seq.weights;
        w.proximity = num_or(jw, "proximity", w.proximity, path + ".weights");
        w.visibility = num_or(jw, "visibility", w.visibility, path + ".weights");
        w.smoothness = num_or(jw, "smoothness", w.smoothness, path + ".weights");
        w.framing = num_or(jw, "framing", w.framing, path + ".weights");
        w.distance = num_or(jw, "distance", w.distance, path + ".weights");
        w.orientation = num_or(jw, "orientation", w.orientation, path + ".weights");
      }
      if (je.contains("objective")) {
        const json& jo = je["objective"];
        check_keys(jo, path + ".objective",
                   {"anchor_px", "subject_height_m", "subject_height_px",
                    "desired_distance", "desired_relative", "use_distance",
                    "use_orientation"});
        ShotObjective& o = seq.objective;
        if (jo.contains("anchor_px")) {
          const json& ja = jo["anchor_px"];
          if (!ja.is_array() || ja.size() != 2 || !ja[0].is_number() ||
              !ja[1].is_number())
            throw ConfigError(path + ".objective.anchor_px: expected [u, v]");
          o.anchor_px = {ja[0].get<double>(), ja[1].get<double>()};
        }
        o.subject_height_m = num_or(jo, "subject_height_m", o.subject_height_m,
                                    path + ".objective");
        o.subject_height_px = num_or(jo, "subject_height_px",
                                     o.subject_height_px, path + ".objective");
        o.desired_distance = num_or(jo, "desired_distance", o.desired_distance,
                                    path + ".objective");
        o.desired_relative = rotation_or(jo, "desired_relative",
                                         o.desired_relative, path + ".objective");
        o.use_distance = bool_or(jo, "use_distance", o.use_distance,
                                 path + ".objective");
        o.use_orientation = bool_or(jo, "use_orientation", o.use_orientation,
                                    path + ".objective");
      }
      seq.override_visibility_range = bool_or(je, "override_visibility_range",
                                              seq.override_visibility_range, path);
      seq.visibility_range = num_or(je, "visibility_range", seq.visibility_range,
                                    path);
      s.sequences.push_back(seq);
    }
  }
  validate(s);
  return s;
}

std::string scenario_to_json_text(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["mode"] = s.mode;
  j["sim"] = {{"dt", s.sim.dt}, {"horizon", s.sim.horizon}};
  j["limits"] = {{"speed_max", s.limits.speed_max},
                 {"accel_max", s.limits.accel_max},
                 {"gimbal_rate_max", s.limits.gimbal_rate_max},
                 {"gimbal_pitch_min", s.limits.gimbal_pitch_min},
                 {"gimbal_pitch_max", s.limits.gimbal_pitch_max},
                 {"focal_min_mm", s.limits.focal_min_mm},
                 {"focal_max_mm", s.limits.focal_max_mm},
                 {"focal_rate_max", s.limits.focal_rate_max},
                 {"altitude_min", s.limits.altitude_min}};
  j["ethics"] = {{"caution_dist", s.ethics.caution_dist},
                 {"safety_dist", s.ethics.safety_dist},
                 {"visibility_range", s.ethics.visibility_range},
                 {"caution_gain", s.ethics.caution_gain},
                 {"safety_gain", s.ethics.safety_gain},
                 {"eye", intrinsics_to(s.ethics.eye)}};
  j["film"] = {{"sensor", sensor_to(s.film.sensor)},
               {"center_u", s.film.center_u},
               {"center_v", s.film.center_v},
               {"skew", s.film.skew}};
  j["solver"] = {{"n_samples", s.solver.n_samples},
                 {"n_elites", s.solver.n_elites},
                 {"n_iterations", s.solver.n_iterations},
                 {"init_stddev",
                  {{"accel", s.solver.init_stddev.accel},
                   {"gimbal_rate", s.solver.init_stddev.gimbal_rate},
                   {"focal_rate", s.solver.init_stddev.focal_rate}}},
                 {"stddev_decay", s.solver.stddev_decay},
                 {"refine_steps", s.solver.refine_steps},
                 {"refine_step_size", s.solver.refine_step_size},
                 {"control_reg", s.solver.control_reg},
                 {"velocity_reg", s.solver.velocity_reg},
                 {"seed", s.solver.seed},
                 {"n_threads", s.solver.n_threads}};
  json waypoints = json::array();
  for (const Waypoint& wp : s.animal.waypoints)
    waypoints.push_back({{"position", to_json(wp.position)}, {"speed", wp.speed}});
  j["animal"] = {{"motion", motion_name(s.animal.motion)},
                 {"initial",
                  {{"position", to_json(s.animal.initial.position)},
                   {"velocity", to_json(s.animal.initial.velocity)},
                   {"heading", to_json(s.animal.initial.heading)}}},
                 {"waypoints", waypoints}};
  j["drone_init"] = {{"position", to_json(s.drone_init.position)},
                     {"velocity", to_json(s.drone_init.velocity)},
                     {"gimbal", to_json(s.drone_init.gimbal)}};
  j["camera_init"] = {{"focal_mm", s.camera_init.focal_mm}};
  json sequences = json::array();
  for (const Sequence& seq : s.sequences) {
    sequences.push_back(
        {{"duration", seq.duration},
         {"weights",
          {{"proximity", seq.weights.proximity},
           {"visibility", seq.weights.visibility},
           {"smoothness", seq.weights.smoothness},
           {"framing", seq.weights.framing},
           {"distance", seq.weights.distance},
           {"orientation", seq.weights.orientation}}},
         {"objective",
          {{"anchor_px",
            json::array({seq.objective.anchor_px.u, seq.objective.anchor_px.v})},
           {"subject_height_m", seq.objective.subject_height_m},
           {"subject_height_px", seq.objective.subject_height_px},
           {"desired_distance", seq.objective.desired_distance},
           {"desired_relative", to_json(seq.objective.desired_relative)},
           {"use_distance", seq.objective.use_distance},
           {"use_orientation", seq.objective.use_orientation}}},
         {"override_visibility_range", seq.override_visibility_range},
         {"visibility_range", seq.visibility_range}});
  }
  j["sequences"] = sequences;
  return j.dump(2) + "\n";
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return scenario_from_json_text(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void save_scenario(const Scenario& s, const std::string& path) {
  write_file_atomic(path, scenario_to_json_text(s));
}

namespace {

SensorSpec film_sensor_default() { return {960, 540, 36.0, 20.25}; }

// Shared scaffolding for both presets.
Scenario preset_base() {
  Scenario s;
  s.mode = "cinewild";
  s.sim = {0.2, 10};
  s.limits = Limits{};
  s.film.sensor = film_sensor_default();
  s.film.center_u = 480;
  s.film.center_v = 270;
  s.film.skew = 0;
  s.ethics.caution_dist = 20.0;
  s.ethics.safety_dist = 5.0;
  s.ethics.visibility_range = 12.0;
  s.ethics.caution_gain = 0.1;
  s.ethics.safety_gain = 1.0;
  // Animal eye: portrait-ish sensor, fixed focal; gives a narrow horizontal
  // field of roughly 21.6 degrees.
  s.ethics.eye.sensor = {960, 540, 13.365, 23.76};
  s.ethics.eye.focal_mm = 35.0;
  s.ethics.eye.center_u = 480;
  s.ethics.eye.center_v = 270;
  s.ethics.eye.skew = 0;
  s.solver = SolverConfig{};
  return s;
}

}  // namespace

Scenario experiment1_preset() {
  Scenario s = preset_base();
  s.name = "walking-giraffe";

  // Giraffe walking a straight line; body reference point 2 m up, subject
  // spans 4 m vertically.
  s.animal.motion = AnimalMotion::kConstantVelocity;
  s.animal.initial.position = Vec3(0, 0, 2.0);
  s.animal.initial.velocity = Vec3(0.8, 0, 0);
  s.animal.initial.heading = {0, 0, 0};

  // Drone launched close behind, already inside the caution band, with the
  // camera aimed at the subject (positive pitch looks down) and the zoom
  // pre-set for the opening extent so the run starts composed.
  s.drone_init.position = Vec3(-10, 0, 3.0);
  s.drone_init.velocity = Vec3::Zero();
  s.drone_init.gimbal = {0, std::atan2(1.0, 10.0), 0};
  s.camera_init.focal_mm = 15.3;

  CostWeights w;
  w.proximity = 15;
  w.visibility = 0;
  w.smoothness = 10;
  w.framing = 1;
  w.distance = 0;
  w.orientation = 400;

  // Braking stiffness tuned for this scenario: high enough that the radial
  // slop from the proximity escape and the flank swing dies quickly, low
  // enough that tracking the walking subject stays affordable.
  s.solver.velocity_reg = 200.0;

  Sequence follow;  // short opener trailing the animal at close range
  follow.duration = 4;
  follow.weights = w;
  follow.weights.distance = 8;  // the opener pins range; later shots free it
  follow.objective.anchor_px = {320, 270};
  follow.objective.subject_height_m = 4.0;
  follow.objective.subject_height_px = 160;
  follow.objective.desired_relative = view_from_azimuth(M_PI);
  follow.objective.use_orientation = true;
  follow.objective.use_distance = true;
  follow.objective.desired_distance = 10;

  Sequence side = follow;  // swing to the animal's right flank and track it
  side.duration = 22;
  side.weights.distance = 0;
  side.objective.use_distance = false;
  side.objective.subject_height_px = 240;
  side.objective.desired_relative = view_from_azimuth(-M_PI / 2);

  Sequence closeup = side;  // same flank, zoomed until the subject fills it
  closeup.duration = 34;
  closeup.objective.anchor_px = {480, 270};
  closeup.objective.subject_height_px = 486;

  s.sequences = {follow, side, closeup};
  return s;
}

Scenario experiment2_preset() {
  Scenario s = preset_base();
  s.name = "resting-tiger";

  s.animal.motion = AnimalMotion::kStationary;
  s.animal.initial.position = Vec3(0, 0, 0.7);
  s.animal.initial.velocity = Vec3::Zero();
  s.animal.initial.heading = {0, 0, 0};

  // Starts dead ahead of the animal, well inside its sight range.
  s.drone_init.position = Vec3(8, 0, 1.0);
  s.drone_init.velocity = Vec3::Zero();
  s.drone_init.gimbal = {0, -std::atan2(0.3, 8.0), M_PI};
  s.camera_init.focal_mm = 35.0;

  CostWeights w;
  w.proximity = 0;
  w.visibility = 50;
  w.smoothness = 0;
  w.framing = 0.5;
  w.distance = 30;
  w.orientation = 100;

  // Gentle braking only: the slip-out move fights a shallow in-view cost
  // basin, so motion must stay cheap; the distance objective already keeps
  // the drone from coasting away.
  s.solver.velocity_reg = 20.0;

  // The frontal-orientation objective is softened while the drone is asked
  // to slip out of the animal's view, and restored once it films from
  // beyond the sight range.
  CostWeights w_relaxed = w;
  w_relaxed.orientation = 5;

  Sequence slip_out;  // hold 10 m, thirds framing, leave the field of view
  slip_out.duration = 20;
  slip_out.weights = w_relaxed;
  slip_out.objective.anchor_px = {320, 270};
  slip_out.objective.subject_height_m = 1.0;
  slip_out.objective.subject_height_px = 240;
  slip_out.objective.desired_distance = 10;
  slip_out.objective.use_distance = true;
  slip_out.objective.desired_relative = view_from_azimuth(0);
  slip_out.objective.use_orientation = true;

  Sequence zoom = slip_out;  // same station, more screen presence
  zoom.objective.subject_height_px = 320;

  Sequence retreat = zoom;  // back out beyond sight range, film frontal
  retreat.weights = w;
  retreat.objective.anchor_px = {480, 270};
  retreat.objective.desired_distance = 15;

  s.sequences = {slip_out, zoom, retreat};
  return s;
}

Scenario baseline_mode(const Scenario& s) {
  Scenario b = s;
  b.mode = "baseline";
  for (Sequence& seq : b.sequences) {
    seq.weights.proximity = 0;
    seq.weights.visibility = 0;
    seq.weights.smoothness = 0;
  }
  return b;
}

}  // namespace cinewild
