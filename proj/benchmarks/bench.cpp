// Micro-benchmarks for the hot path: pixel projection, one stage cost,
// a full horizon rollout, and one complete replanning step.

#include <benchmark/benchmark.h>

#include "cinewild/costs.hpp"
#include "cinewild/planner.hpp"
#include "cinewild/scenario.hpp"

using namespace cinewild;

namespace {

struct Fixture {
  Scenario scn = experiment1_preset();
  PlanningProblem prob;
  DroneState drone;
  CameraState camera;
  TargetState target;
  std::vector<TargetState> forecast;
  std::vector<DroneInput> ud;
  std::vector<CameraInput> uc;

  Fixture() {
    const Sequence& seq = scn.sequences[1];
    prob.objective = seq.objective;
    prob.weights = seq.weights;
    prob.ethics = scn.ethics;
    prob.film = scn.film;
    prob.limits = scn.limits;
    prob.dt = scn.sim.dt;
    drone = scn.drone_init;
    camera = scn.camera_init;
    target = scn.animal.state_at(5.0);
    forecast = forecast_target(target, scn.sim.dt, scn.sim.horizon);
    ud.resize(static_cast<size_t>(scn.sim.horizon));
    uc.resize(static_cast<size_t>(scn.sim.horizon));
    for (size_t k = 0; k < ud.size(); ++k) {
      ud[k].accel = Vec3(0.2, -0.1, 0.05);
      ud[k].gimbal_rate = Vec3(0.0, 0.02, -0.04);
      uc[k].focal_rate = 1.5;
    }
  }
};

void BM_project(benchmark::State& state) {
  const Intrinsics intr = Intrinsics::centered(SensorSpec{}, 35);
  const Vec3 body(12.0, 1.5, -0.8);
  for (auto _ : state) {
    auto px = project(intr, body);
    benchmark::DoNotOptimize(px);
  }
}
BENCHMARK(BM_project);

void BM_stage_cost(benchmark::State& state) {
  const Fixture f;
  for (auto _ : state) {
    CostBreakdown c = stage_cost(f.drone, f.camera, f.target, f.ud[0],
                                 f.prob.objective, f.prob.weights,
                                 f.prob.ethics, f.prob.film);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_stage_cost);

void BM_rollout(benchmark::State& state) {
  const Fixture f;
  for (auto _ : state) {
    RolloutResult r =
        rollout_cost(f.prob, f.drone, f.camera, f.forecast, f.ud, f.uc);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_rollout);

void BM_plan(benchmark::State& state) {
  const Fixture f;
  SolverConfig cfg = f.scn.solver;
  cfg.seed = 12;
  for (auto _ : state) {
    Plan p = plan(f.prob, f.drone, f.camera, f.target, f.scn.sim, cfg);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_plan)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
