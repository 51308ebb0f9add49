// Copyright 2026 The clothopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Microbenchmarks for the hot paths: the forward solve, the reverse sweep,
// obstacle distance queries, and one full penalized evaluation.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "clothopt/diff.h"
#include "clothopt/evaluator.h"
#include "clothopt/mesh.h"
#include "clothopt/optimize.h"
#include "clothopt/safety.h"
#include "clothopt/scene.h"
#include "clothopt/xpbd.h"

namespace {

using clothopt::ClothMesh;
using clothopt::CompiledScene;
using clothopt::ControlSequence;
using clothopt::SimParams;
using clothopt::State;
using clothopt::Vec3;

// The preset-sized workload: a pinned 10x10 sheet over ten steps.
struct SheetFixture {
  ClothMesh mesh;
  State initial;
  ControlSequence controls;
  SimParams params;

  SheetFixture() {
    mesh = clothopt::build_grid(10, 10, 1.0, Vec3::Zero(), Vec3::UnitX(),
                                -Vec3::UnitZ());
    const std::vector<int> pins = {0, 9};
    clothopt::pin_particles(mesh, pins);
    initial = State{mesh.rest_positions};
    controls = ControlSequence::zeros(pins, 10);
    std::mt19937 rng(5u);
    std::uniform_real_distribution<double> jitter(-0.1, 0.1);
    for (auto& step : controls.displacements) {
      for (Vec3& d : step) d = Vec3(jitter(rng), jitter(rng), jitter(rng));
    }
    params.dt = 0.3;
  }
};

const SheetFixture& sheet() {
  static const SheetFixture fixture;
  return fixture;
}

void BM_Rollout(benchmark::State& state) {
  const SheetFixture& f = sheet();
  for (auto _ : state) {
    const clothopt::Rollout run = clothopt::rollout(
        f.initial, f.controls, f.mesh, f.params, /*record=*/false);
    benchmark::DoNotOptimize(run.states.back().positions[50].z());
  }
}
BENCHMARK(BM_Rollout)->Unit(benchmark::kMillisecond);

void BM_RecordedRollout(benchmark::State& state) {
  const SheetFixture& f = sheet();
  for (auto _ : state) {
    const clothopt::Rollout run = clothopt::rollout(
        f.initial, f.controls, f.mesh, f.params, /*record=*/true);
    benchmark::DoNotOptimize(run.tape.steps.size());
  }
}
BENCHMARK(BM_RecordedRollout)->Unit(benchmark::kMillisecond);

void BM_Backward(benchmark::State& state) {
  const SheetFixture& f = sheet();
  const clothopt::Rollout run = clothopt::rollout(
      f.initial, f.controls, f.mesh, f.params, /*record=*/true);
  clothopt::BackwardSeed seed = clothopt::BackwardSeed::zeros(
      run.horizon(), f.mesh.particle_count(), f.controls.point_count());
  for (auto& row : seed.state_adjoints.back()) row = Vec3(0, 0, 1);
  for (auto _ : state) {
    const clothopt::GradientResult grad =
        clothopt::backward(run, f.mesh, f.params, seed);
    benchmark::DoNotOptimize(grad.d_controls[0][0].x());
  }
}
BENCHMARK(BM_Backward)->Unit(benchmark::kMillisecond);

void BM_SphereUnionSdf(benchmark::State& state) {
  const clothopt::SphereObstacle obstacle =
      clothopt::build_u_shape(2.4, 8.0, 12.6, 18);
  std::mt19937 rng(11u);
  std::uniform_real_distribution<double> coord(-8.0, 8.0);
  std::vector<Vec3> probes(1024);
  for (Vec3& p : probes) p = Vec3(coord(rng), coord(rng), coord(rng));
  for (auto _ : state) {
    double sum = 0.0;
    for (const Vec3& p : probes) sum += clothopt::sdf(obstacle, p);
    benchmark::DoNotOptimize(sum);
  }
}
BENCHMARK(BM_SphereUnionSdf);

void BM_EvaluatePenalized(benchmark::State& state) {
  const clothopt::Scene scene = clothopt::preset("ushape", 0.2);
  const CompiledScene compiled = clothopt::compile_scene(scene);
  const ControlSequence controls = clothopt::initialize_controls(
      compiled, clothopt::InitStrategy::kStraightLine);
  for (auto _ : state) {
    const clothopt::PenalizedEvaluation eval =
        clothopt::evaluate_penalized(compiled, controls, 10.0);
    benchmark::DoNotOptimize(eval.phi);
  }
}
BENCHMARK(BM_EvaluatePenalized)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
