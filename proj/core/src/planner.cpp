#include "cinewild/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <vector>

namespace cinewild {

namespace {

constexpr int kChannels = 7;  // accel xyz, gimbal rate rpy, focal rate

// splitmix64 finalizer; decorrelates consecutive stream seeds.
std::uint64_t scramble(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent stream per (seed, iteration, sample); evaluation order and
// thread count never touch the draw sequence.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t iter,
                          std::uint64_t idx) {
  std::uint64_t s = scramble(seed + 0x9e3779b97f4a7c15ULL);
  s = scramble(s ^ (iter + 0xbf58476d1ce4e5b9ULL));
  return scramble(s ^ (idx + 0x94d049bb133111ebULL));
}

// Gaussian draws via Box-Muller on a splitmix64 state: fixed consumption,
// reproducible across platforms with IEEE doubles.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : state_(seed) {}

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

 private:
  double uniform() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return static_cast<double>(scramble(state_) >> 11) * 0x1.0p-53;
  }

  std::uint64_t state_;
  bool have_spare_{false};
  double spare_{0};
};

Eigen::VectorXd channel_scales(const Limits& lim, int horizon) {
  Eigen::VectorXd s(horizon * kChannels);
  for (int k = 0; k < horizon; ++k) {
    const int b = k * kChannels;
    s[b + 0] = s[b + 1] = s[b + 2] = lim.accel_max;
    s[b + 3] = s[b + 4] = s[b + 5] = lim.gimbal_rate_max;
    s[b + 6] = lim.focal_rate_max;
  }
  return s;
}

void unflatten(const Eigen::VectorXd& x, std::vector<DroneInput>& ud,
               std::vector<CameraInput>& uc) {
  const int n = static_cast<int>(ud.size());
  for (int k = 0; k < n; ++k) {
    const int b = k * kChannels;
    ud[k].accel = Vec3(x[b + 0], x[b + 1], x[b + 2]);
    ud[k].gimbal_rate = Vec3(x[b + 3], x[b + 4], x[b + 5]);
    uc[k].focal_rate = x[b + 6];
  }
}

Eigen::VectorXd flatten(const std::vector<DroneInput>& ud,
                        const std::vector<CameraInput>& uc) {
  const int n = static_cast<int>(ud.size());
  Eigen::VectorXd x(n * kChannels);
  for (int k = 0; k < n; ++k) {
    const int b = k * kChannels;
    x.segment<3>(b) = ud[k].accel;
    x.segment<3>(b + 3) = ud[k].gimbal_rate;
    x[b + 6] = uc[k].focal_rate;
  }
  return x;
}

// Rollout with a caller-chosen accumulator for the cross-stage sum.
template <typename Acc>
Acc rollout_total(const PlanningProblem& prob, DroneState d, CameraState c,
                  const std::vector<TargetState>& forecast,
                  const std::vector<DroneInput>& ud,
                  const std::vector<CameraInput>& uc,
                  std::vector<CostBreakdown>* stages) {
  const int n = static_cast<int>(ud.size());
  Acc total = 0;
  if (stages) {
    stages->clear();
    stages->reserve(static_cast<size_t>(n));
  }
  for (int k = 0; k < n; ++k) {
    DroneInput u = ud[k];
    CameraInput cu = uc[k];
    clamp_to_limits(d, c, u, cu, prob.limits);
    d = step_drone(d, u, prob.dt);
    c = step_camera(c, cu, prob.dt);
    {  // feasibility of the post-step state (inputs already clamped)
      DroneInput u0;
      CameraInput c0;
      clamp_to_limits(d, c, u0, c0, prob.limits);
    }
    const CostBreakdown stage = stage_cost(
        d, c, forecast[static_cast<size_t>(k)], u, prob.objective,
        prob.weights, prob.ethics, prob.film);
    total += static_cast<Acc>(stage.total());
    if (stages) stages->push_back(stage);
  }
  return total;
}

// Base gimbal/zoom rates that hold the shot across the coming step: re-aim
// so the subject centre projects onto the anchor pixel and re-zoom so it
// spans the requested extent at the post-step state (whose position is
// already determined by the current velocity).  The sampled gimbal/focal
// channels act as deviations around these rates, which makes "move the
// drone while keeping the shot" an axis-aligned direction of the search
// space instead of a coupled accel+gimbal+zoom valley that a derivative-free
// sampler would practically never draw.
void base_rates(const PlanningProblem& prob, const DroneState& d,
                const CameraState& c, const TargetState& next,
                Vec3& gimbal_rate, double& focal_rate) {
  gimbal_rate = Vec3::Zero();
  focal_rate = 0;
  const double dt = prob.dt;
  const Vec3 look = next.position - (d.position + dt * d.velocity);
  const double dist = look.norm();
  const double rho = std::hypot(look.x(), look.y());
  if (dist < 1e-6 || rho < 1e-9) return;  // on top of / directly above it

  const ShotObjective& obj = prob.objective;
  const Limits& lim = prob.limits;
  const Intrinsics intr = prob.film.at_focal(c.focal_mm);
  const double px_x = intr.pixels_per_mm_x();
  const double px_y = intr.pixels_per_mm_y();

  // Zoom first; the aim offsets depend on the focal in effect after the step.
  double f_next = std::clamp(c.focal_mm, lim.focal_min_mm, lim.focal_max_mm);
  if (obj.subject_height_px > 0 && obj.subject_height_m > 0) {
    const double f_des =
        obj.subject_height_px * dist / (px_y * obj.subject_height_m);
    focal_rate = std::clamp((f_des - c.focal_mm) / dt, -lim.focal_rate_max,
                            lim.focal_rate_max);
    f_next = std::clamp(c.focal_mm + dt * focal_rate, lim.focal_min_mm,
                        lim.focal_max_mm);
  }

  // Anchor offsets as camera-frame slopes: y/x = A and z/x = B at the
  // anchor pixel (inverting the projection, including skew).
  const double du = obj.anchor_px.u - intr.center_u;
  const double dv = obj.anchor_px.v - intr.center_v;
  const double B = -dv / (px_y * f_next);
  const double A = -(du + intr.skew * B) / (px_x * f_next);

  // Yaw/pitch (roll -> 0) satisfying both slopes exactly: with the look
  // vector rotated into the yaw frame as (h, l, z), the lateral part fixes
  // yaw via l = A * x_cam, then pitch rotates (h, z) onto the (1, B) ray.
  const double x_cam = dist / std::sqrt(1 + A * A + B * B);
  const double s = std::clamp(A * x_cam / rho, -1.0, 1.0);
  const double yaw = std::atan2(look.y(), look.x()) - std::asin(s);
  const double h = rho * std::sqrt(1.0 - s * s);
  const double pitch =
      std::clamp(std::atan(B) - std::atan2(look.z(), h), lim.gimbal_pitch_min,
                 lim.gimbal_pitch_max);

  gimbal_rate.x() = wrap_angle(-d.gimbal.roll) / dt;
  gimbal_rate.y() = (pitch - d.gimbal.pitch) / dt;
  gimbal_rate.z() = wrap_angle(yaw - d.gimbal.yaw) / dt;
}

// Rollout over deviation variables: each step's actual inputs are the
// aim-holding base rates plus the sampled deviations (accelerations pass
// through unchanged), with the same clamping and cost accounting as
// rollout_total.  Optionally writes the materialized (post-clamp) inputs.
double materialized_total(const PlanningProblem& prob, DroneState d,
                          CameraState c,
                          const std::vector<TargetState>& forecast,
                          const Eigen::VectorXd& x,
                          std::vector<DroneInput>* out_ud,
                          std::vector<CameraInput>* out_uc) {
  const int n = static_cast<int>(x.size()) / kChannels;
  double total = 0;
  for (int k = 0; k < n; ++k) {
    const int b = k * kChannels;
    Vec3 g_base;
    double f_base;
    base_rates(prob, d, c, forecast[static_cast<size_t>(k)], g_base, f_base);
    DroneInput u;
    u.accel = Vec3(x[b + 0], x[b + 1], x[b + 2]);
    u.gimbal_rate = g_base + Vec3(x[b + 3], x[b + 4], x[b + 5]);
    CameraInput cu;
    cu.focal_rate = f_base + x[b + 6];
    clamp_to_limits(d, c, u, cu, prob.limits);
    d = step_drone(d, u, prob.dt);
    c = step_camera(c, cu, prob.dt);
    {  // feasibility of the post-step state (inputs already clamped)
      DroneInput u0;
      CameraInput c0;
      clamp_to_limits(d, c, u0, c0, prob.limits);
    }
    const CostBreakdown stage = stage_cost(
        d, c, forecast[static_cast<size_t>(k)], u, prob.objective,
        prob.weights, prob.ethics, prob.film);
    total += stage.total();
    if (out_ud) (*out_ud)[static_cast<size_t>(k)] = u;
    if (out_uc) (*out_uc)[static_cast<size_t>(k)] = cu;
  }
  return total;
}

// Deviations that reproduce a sequence of actual inputs along its own
// trajectory; expresses the shifted previous plan in deviation space.
Eigen::VectorXd deviations_of(const PlanningProblem& prob, DroneState d,
                              CameraState c,
                              const std::vector<TargetState>& forecast,
                              const std::vector<DroneInput>& ud,
                              const std::vector<CameraInput>& uc) {
  const int n = static_cast<int>(ud.size());
  Eigen::VectorXd x(n * kChannels);
  for (int k = 0; k < n; ++k) {
    const int b = k * kChannels;
    const size_t ks = static_cast<size_t>(k);
    Vec3 g_base;
    double f_base;
    base_rates(prob, d, c, forecast[ks], g_base, f_base);
    x.segment<3>(b) = ud[ks].accel;
    x.segment<3>(b + 3) = ud[ks].gimbal_rate - g_base;
    x[b + 6] = uc[ks].focal_rate - f_base;
    DroneInput u = ud[ks];
    CameraInput cu = uc[ks];
    clamp_to_limits(d, c, u, cu, prob.limits);
    d = step_drone(d, u, prob.dt);
    c = step_camera(c, cu, prob.dt);
    DroneInput u0;
    CameraInput c0;
    clamp_to_limits(d, c, u0, c0, prob.limits);
  }
  return x;
}

void check_rollout_args(const std::vector<TargetState>& forecast,
                        const std::vector<DroneInput>& ud,
                        const std::vector<CameraInput>& uc) {
  if (ud.size() != uc.size())
    throw std::invalid_argument("rollout: drone/camera input lengths differ");
  if (forecast.size() < ud.size())
    throw std::invalid_argument("rollout: forecast shorter than input sequence");
}

}  // namespace

RolloutResult rollout_cost(const PlanningProblem& prob, const DroneState& xd,
                           const CameraState& xc,
                           const std::vector<TargetState>& forecast,
                           const std::vector<DroneInput>& ud,
                           const std::vector<CameraInput>& uc) {
  check_rollout_args(forecast, ud, uc);
  RolloutResult r;
  r.total = rollout_total<double>(prob, xd, xc, forecast, ud, uc, &r.stages);
  return r;
}

Eigen::VectorXd finite_difference_gradient(
    const PlanningProblem& prob, const DroneState& xd, const CameraState& xc,
    const std::vector<TargetState>& forecast,
    const std::vector<DroneInput>& ud, const std::vector<CameraInput>& uc,
    double step_scale, bool high_precision) {
  check_rollout_args(forecast, ud, uc);
  const int n = static_cast<int>(ud.size());
  const int dim = n * kChannels;
  const Eigen::VectorXd scales = channel_scales(prob.limits, n);
  const Eigen::VectorXd x0 = flatten(ud, uc);

  std::vector<DroneInput> pud(ud);
  std::vector<CameraInput> puc(uc);
  Eigen::VectorXd g(dim);
  for (int i = 0; i < dim; ++i) {
    const double h = 1e-3 * scales[i] * step_scale;
    Eigen::VectorXd x = x0;
    x[i] = x0[i] + h;
    unflatten(x, pud, puc);
    x[i] = x0[i] - h;
    if (high_precision) {
      const long double fp =
          rollout_total<long double>(prob, xd, xc, forecast, pud, puc, nullptr);
      unflatten(x, pud, puc);
      const long double fm =
          rollout_total<long double>(prob, xd, xc, forecast, pud, puc, nullptr);
      g[i] = static_cast<double>((fp - fm) / (2.0L * static_cast<long double>(h)));
    } else {
      const double fp =
          rollout_total<double>(prob, xd, xc, forecast, pud, puc, nullptr);
      unflatten(x, pud, puc);
      const double fm =
          rollout_total<double>(prob, xd, xc, forecast, pud, puc, nullptr);
      g[i] = (fp - fm) / (2.0 * h);
    }
  }
  return g;
}

Plan plan(const PlanningProblem& prob, const DroneState& xd,
          const CameraState& xc, const TargetState& target_now,
          const SimConfig& sim, const SolverConfig& solver,
          const Plan* previous) {
  if (sim.horizon < 1) throw std::invalid_argument("plan: horizon must be >= 1");
  if (sim.dt <= 0) throw std::invalid_argument("plan: dt must be positive");
  if (solver.n_samples < 2)
    throw std::invalid_argument("plan: n_samples must be >= 2");
  if (solver.n_elites < 1 || solver.n_elites > solver.n_samples)
    throw std::invalid_argument("plan: n_elites must be in [1, n_samples]");
  if (solver.n_iterations < 1)
    throw std::invalid_argument("plan: n_iterations must be >= 1");
  if (solver.refine_steps < 0)
    throw std::invalid_argument("plan: refine_steps must be >= 0");
  if (solver.n_threads < 1)
    throw std::invalid_argument("plan: n_threads must be >= 1");
  if (solver.init_stddev.accel <= 0 || solver.init_stddev.gimbal_rate <= 0 ||
      solver.init_stddev.focal_rate <= 0)
    throw std::invalid_argument("plan: init_stddev must be positive");

  const int n = sim.horizon;
  const int dim = n * kChannels;
  const std::vector<TargetState> forecast =
      forecast_target(target_now, sim.dt, n);
  const Eigen::VectorXd scales = channel_scales(prob.limits, n);

  // Internal objective over deviation variables: true rollout cost of the
  // materialized inputs plus regularizers the reported costs never see.
  // control_reg is a tiny quadratic on normalized deviations (ties resolve
  // toward the shot-holding base law); velocity_reg penalizes the predicted
  // drone speed so translation directions the stage costs cannot rank brake
  // to rest instead of coasting.  The speed prediction is the unclamped
  // linear propagation — exact below speed_max, approximate at the cap,
  // which is fine for a ranking regularizer.
  const auto eval = [&](const Eigen::VectorXd& x) -> double {
    const double true_cost =
        materialized_total(prob, xd, xc, forecast, x, nullptr, nullptr);
    double reg = 0;
    for (int i = 0; i < dim; ++i) {
      const double r = x[i] / scales[i];
      reg += r * r;
    }
    double vreg = 0;
    if (solver.velocity_reg > 0) {
      Vec3 v = xd.velocity;
      const double v_max = prob.limits.speed_max;
      for (int k = 0; k < n; ++k) {
        const int b = k * kChannels;
        v += prob.dt * Vec3(x[b + 0], x[b + 1], x[b + 2]);
        vreg += v.squaredNorm() / (v_max * v_max);
      }
    }
    return true_cost + solver.control_reg * reg + solver.velocity_reg * vreg;
  };

  // Deterministic candidates: the shifted previous plan re-expressed as
  // deviations, and the all-zero deviation (hover and hold the shot).
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd warm = zero;
  if (previous &&
      previous->drone_inputs.size() == static_cast<size_t>(n) &&
      previous->camera_inputs.size() == static_cast<size_t>(n)) {
    std::vector<DroneInput> prev_ud(previous->drone_inputs);
    std::vector<CameraInput> prev_uc(previous->camera_inputs);
    for (int k = 0; k + 1 < n; ++k) {  // shift one step, duplicate the last
      prev_ud[static_cast<size_t>(k)] = prev_ud[static_cast<size_t>(k) + 1];
      prev_uc[static_cast<size_t>(k)] = prev_uc[static_cast<size_t>(k) + 1];
    }
    warm = deviations_of(prob, xd, xc, forecast, prev_ud, prev_uc);
  }
  const double internal_warm = eval(warm);
  const double internal_zero = eval(zero);

  Eigen::VectorXd best_x = warm;
  double best_internal = internal_warm;
  if (internal_zero < best_internal) {
    best_x = zero;
    best_internal = internal_zero;
  }

  Eigen::VectorXd mean = warm;
  Eigen::VectorXd sigma(dim), floor(dim);
  for (int k = 0; k < n; ++k) {
    const int b = k * kChannels;
    for (int i = 0; i < 3; ++i) sigma[b + i] = solver.init_stddev.accel;
    for (int i = 3; i < 6; ++i) sigma[b + i] = solver.init_stddev.gimbal_rate;
    sigma[b + 6] = solver.init_stddev.focal_rate;
  }
  floor = 1e-4 * scales;

  SolverTrace trace;
  trace.best_internal_per_iteration.reserve(
      static_cast<size_t>(solver.n_iterations));

  Eigen::MatrixXd samples(dim, solver.n_samples);
  Eigen::VectorXd costs(solver.n_samples);
  std::vector<int> order(static_cast<size_t>(solver.n_samples));

  for (int iter = 0; iter < solver.n_iterations; ++iter) {
    for (int i = 0; i < solver.n_samples; ++i) {
      NormalStream rng(stream_seed(solver.seed, static_cast<std::uint64_t>(iter),
                                   static_cast<std::uint64_t>(i)));
      for (int j = 0; j < dim; ++j)
        samples(j, i) = mean[j] + sigma[j] * rng.normal();
    }

    const auto eval_range = [&](int lo, int hi) {
      for (int i = lo; i < hi; ++i) costs[i] = eval(samples.col(i));
    };
    if (solver.n_threads <= 1) {
      eval_range(0, solver.n_samples);
    } else {
      // Fixed per-index slots: the reduction below is order-independent, so
      // any worker count yields the same plan.
      std::vector<std::thread> pool;
      const int chunk =
          (solver.n_samples + solver.n_threads - 1) / solver.n_threads;
      for (int t = 0; t < solver.n_threads; ++t) {
        const int lo = t * chunk;
        const int hi = std::min(solver.n_samples, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(eval_range, lo, hi);
      }
      for (auto& th : pool) th.join();
    }

    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (costs[a] != costs[b]) return costs[a] < costs[b];
      return a < b;  // equal costs: the lower sample index wins
    });

    if (costs[order[0]] < best_internal) {
      best_internal = costs[order[0]];
      best_x = samples.col(order[0]);
    }
    trace.best_internal_per_iteration.push_back(best_internal);

    Eigen::VectorXd elite_mean = Eigen::VectorXd::Zero(dim);
    for (int e = 0; e < solver.n_elites; ++e)
      elite_mean += samples.col(order[static_cast<size_t>(e)]);
    elite_mean /= solver.n_elites;
    Eigen::VectorXd elite_var = Eigen::VectorXd::Zero(dim);
    for (int e = 0; e < solver.n_elites; ++e) {
      const Eigen::VectorXd d =
          samples.col(order[static_cast<size_t>(e)]) - elite_mean;
      elite_var += d.cwiseProduct(d);
    }
    elite_var /= solver.n_elites;

    mean = elite_mean;
    // Never widen, always decay a little: directions the costs cannot rank
    // shrink geometrically instead of wandering.
    sigma = elite_var.cwiseSqrt()
                .cwiseMax(floor)
                .cwiseMin(sigma)
                .cwiseProduct(Eigen::VectorXd::Constant(dim, solver.stddev_decay));
  }
  trace.best_sampled_internal = best_internal;

  // Damped diagonal-Newton descent from the best sample.  The curvature
  // floor equals the regularizer's own curvature, so input directions the
  // stage costs ignore contract straight to zero.
  Eigen::VectorXd x = best_x;
  double f = best_internal;
  const Eigen::VectorXd probe = 1e-3 * scales;
  const Eigen::VectorXd curv_floor =
      (2.0 * std::max(solver.control_reg, 1e-12)) *
      scales.cwiseProduct(scales).cwiseInverse();
  for (int step = 0; step < solver.refine_steps; ++step) {
    Eigen::VectorXd g(dim), curv(dim);
    for (int i = 0; i < dim; ++i) {
      Eigen::VectorXd xp = x;
      xp[i] = x[i] + probe[i];
      const double fp = eval(xp);
      xp[i] = x[i] - probe[i];
      const double fm = eval(xp);
      g[i] = (fp - fm) / (2.0 * probe[i]);
      curv[i] = (fp - 2.0 * f + fm) / (probe[i] * probe[i]);
    }
    Eigen::VectorXd dir(dim);
    for (int i = 0; i < dim; ++i) {
      const double denom = std::max(curv[i], curv_floor[i]);
      double d = -g[i] / denom;
      const double cap = 0.5 * scales[i];
      dir[i] = std::clamp(d, -cap, cap);
    }
    if (dir.cwiseQuotient(scales).lpNorm<Eigen::Infinity>() < 1e-10) break;

    bool accepted = false;
    double alpha = solver.refine_step_size;
    for (int t = 0; t < 8; ++t) {
      const Eigen::VectorXd xt = x + alpha * dir;
      const double ft = eval(xt);
      if (ft < f) {
        x = xt;
        f = ft;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
  }
  trace.refined_internal = f;

  // Preference order on ties: refined, best sample, warm start, zero.
  const Eigen::VectorXd* win = &x;
  double win_internal = f;
  trace.winner = 0;
  const std::pair<const Eigen::VectorXd*, double> fallbacks[] = {
      {&best_x, best_internal}, {&warm, internal_warm}, {&zero, internal_zero}};
  int slot = 1;
  for (const auto& [cand, cost] : fallbacks) {
    if (cost < win_internal) {
      win = cand;
      win_internal = cost;
      trace.winner = slot;
    }
    ++slot;
  }

  Plan out;
  out.trace = trace;
  out.drone_inputs.resize(static_cast<size_t>(n));
  out.camera_inputs.resize(static_cast<size_t>(n));
  // Materialization clamps every input against the state it applies to, so
  // the returned sequences sit inside Limits by construction.
  materialized_total(prob, xd, xc, forecast, *win, &out.drone_inputs,
                     &out.camera_inputs);
  const RolloutResult final_rollout = rollout_cost(
      prob, xd, xc, forecast, out.drone_inputs, out.camera_inputs);
  out.predicted_cost = final_rollout.total;
  out.stage_costs = final_rollout.stages;

  // The regularizers rank candidates, not the reported cost, so the pick
  // could in principle roll out worse than doing nothing.  Hold the hard
  // never-worse-than-zero-input guarantee by swapping in the all-zero plan
  // whenever that happens.
  const std::vector<DroneInput> zero_ud(static_cast<size_t>(n));
  const std::vector<CameraInput> zero_uc(static_cast<size_t>(n));
  const RolloutResult zero_rollout =
      rollout_cost(prob, xd, xc, forecast, zero_ud, zero_uc);
  if (final_rollout.total > zero_rollout.total) {
    out.drone_inputs = zero_ud;
    out.camera_inputs = zero_uc;
    out.predicted_cost = zero_rollout.total;
    out.stage_costs = zero_rollout.stages;
    out.trace.winner = 3;  // the zero plan's slot in the preference order
  }
  return out;

}

}  // namespace cinewild
