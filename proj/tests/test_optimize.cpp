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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "clothopt/evaluator.h"
#include "clothopt/optimize.h"
#include "clothopt/safety.h"
#include "clothopt/scene.h"
#include "clothopt/types.h"
#include "clothopt/xpbd.h"

namespace {

using clothopt::CompiledScene;
using clothopt::ControlSequence;
using clothopt::InitStrategy;
using clothopt::OptimizationReport;
using clothopt::OptimizerConfig;
using clothopt::Scene;
using clothopt::Vec3;

// A small hanging sheet with a reachable sideways line target; fast enough
// for full optimization runs inside unit tests.
Scene small_swing_scene() {
  Scene scene;
  scene.mesh.rows = 3;
  scene.mesh.cols = 3;
  scene.mesh.spacing = 1.0;
  scene.mesh.origin = Vec3::Zero();
  scene.mesh.col_axis = "+x";
  scene.mesh.row_axis = "-z";
  scene.control_points = {0, 2};
  scene.horizon = 4;
  scene.sim.dt = 0.3;
  scene.sim.iterations = 30;
  scene.target.particle_indices = {6, 7, 8};
  scene.target.target_positions = {Vec3(0.0, 1.5, -2.0), Vec3(1.0, 1.5, -2.0),
                                   Vec3(2.0, 1.5, -2.0)};
  scene.weights.alpha = 1.0;
  scene.weights.beta = 1e-4;
  scene.init = InitStrategy::kStraightLine;
  return scene;
}

// The same sheet with a small sphere placed near (not on) the straight path
// of the bottom edge, so the constrained run must shape around it.
Scene small_constrained_scene() {
  Scene scene = small_swing_scene();
  clothopt::SphereObstacle obstacle;
  obstacle.spheres = {{Vec3(1.0, 0.75, -2.2), 0.3}};
  scene.obstacle = obstacle;
  scene.delta = 0.1;
  return scene;
}

double loss_of(const CompiledScene& scene, const ControlSequence& controls) {
  const clothopt::Rollout r = clothopt::rollout(
      scene.initial_state, controls, scene.mesh, scene.params, false);
  return clothopt::evaluate_metrics(scene, r.states, controls).loss;
}

}  // namespace

TEST_CASE("initialize_controls: zeros shape") {
  const CompiledScene scene =
      clothopt::compile_scene(clothopt::preset("ushape", 0.2));
  const ControlSequence u =
      clothopt::initialize_controls(scene, InitStrategy::kZeros);
  REQUIRE(u.horizon() == 10);
  REQUIRE(u.point_count() == 2);
  for (const auto& step : u.displacements) {
    for (const Vec3& v : step) {
      CHECK(v == Vec3::Zero());
    }
  }
}

TEST_CASE("initialize_controls: straight line divides the goal translation") {
  // Targets displaced from the targeted particles by a uniform (1,0,0):
  // the mean required displacement is (1,0,0), split into T equal steps.
  Scene scene = small_swing_scene();
  scene.horizon = 10;
  const CompiledScene compiled = clothopt::compile_scene(scene);
  Scene shifted = scene;
  for (int j = 0; j < shifted.target.count(); ++j) {
    shifted.target.target_positions[j] =
        compiled.initial_state.positions[shifted.target.particle_indices[j]] +
        Vec3(1.0, 0.0, 0.0);
  }
  const ControlSequence u = clothopt::initialize_controls(
      clothopt::compile_scene(shifted), InitStrategy::kStraightLine);
  for (const auto& step : u.displacements) {
    for (const Vec3& v : step) {
      CHECK(v.isApprox(Vec3(0.1, 0.0, 0.0), 1e-12));
    }
  }
}

TEST_CASE("initialize_controls: goal at start degrades to zeros") {
  Scene scene = small_swing_scene();
  const CompiledScene compiled = clothopt::compile_scene(scene);
  Scene stay = scene;
  for (int j = 0; j < stay.target.count(); ++j) {
    stay.target.target_positions[j] =
        compiled.initial_state.positions[stay.target.particle_indices[j]];
  }
  const ControlSequence u = clothopt::initialize_controls(
      clothopt::compile_scene(stay), InitStrategy::kStraightLine);
  for (const auto& step : u.displacements) {
    for (const Vec3& v : step) {
      CHECK(v.norm() == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("initialize_controls: no targets degrades to zeros") {
  Scene scene = small_swing_scene();
  scene.target.particle_indices.clear();
  scene.target.target_positions.clear();
  const ControlSequence u = clothopt::initialize_controls(
      clothopt::compile_scene(scene), InitStrategy::kStraightLine);
  for (const auto& step : u.displacements) {
    for (const Vec3& v : step) {
      CHECK(v == Vec3::Zero());
    }
  }
}

TEST_CASE("optimize: unconstrained run cuts the loss by at least half") {
  const Scene scene = small_swing_scene();
  const CompiledScene compiled = clothopt::compile_scene(scene);
  const ControlSequence zeros =
      clothopt::initialize_controls(compiled, InitStrategy::kZeros);
  const double baseline = loss_of(compiled, zeros);

  OptimizerConfig config;
  config.max_inner_iterations = 80;
  const ControlSequence init =
      clothopt::initialize_controls(compiled, compiled.init);
  const OptimizationReport report = clothopt::optimize(compiled, init, config);
  const double optimized = loss_of(compiled, report.best_controls);

  CHECK(report.status == clothopt::ConvergenceStatus::kFeasible);
  CHECK(optimized <= 0.5 * baseline);
  REQUIRE_FALSE(report.rounds.empty());
  // Unconstrained scenes finish in a single penalty round.
  CHECK(report.rounds.size() == 1);
  CHECK(report.final_round().metrics.safety == 0.0);
}

TEST_CASE("optimize: inner rounds never increase the penalized objective") {
  const Scene scene = small_swing_scene();
  const CompiledScene compiled = clothopt::compile_scene(scene);
  OptimizerConfig config;
  config.max_inner_iterations = 60;
  const OptimizationReport report = clothopt::optimize(
      compiled, clothopt::initialize_controls(compiled, compiled.init),
      config);
  for (const clothopt::RoundRecord& round : report.rounds) {
    REQUIRE_FALSE(round.phi_history.empty());
    for (size_t k = 1; k < round.phi_history.size(); ++k) {
      CHECK(round.phi_history[k] <= round.phi_history[k - 1]);
    }
  }
}

TEST_CASE("optimize: feasible status implies verified clearance") {
  const Scene scene = small_constrained_scene();
  const CompiledScene compiled = clothopt::compile_scene(scene);
  OptimizerConfig config;
  config.max_inner_iterations = 100;
  const OptimizationReport report = clothopt::optimize(
      compiled, clothopt::initialize_controls(compiled, compiled.init),
      config);
  REQUIRE(report.status == clothopt::ConvergenceStatus::kFeasible);

  // Cross-check the clearance claim on a fresh rollout, independently of
  // the penalty machinery.
  const clothopt::Rollout r =
      clothopt::rollout(compiled.initial_state, report.best_controls,
                        compiled.mesh, compiled.params, false);
  const double min_d =
      clothopt::min_sdf_over_trajectory(r.states, compiled.obstacle);
  OptimizerConfig defaults;
  CHECK(min_d >= compiled.delta - defaults.feasibility_tol);
  CHECK(std::abs(report.final_round().metrics.safety) <=
        defaults.feasibility_tol);
}

TEST_CASE("optimize: determinism across repeated runs") {
  const Scene scene = small_constrained_scene();
  const CompiledScene compiled = clothopt::compile_scene(scene);
  const ControlSequence init =
      clothopt::initialize_controls(compiled, compiled.init);
  OptimizerConfig config;
  config.max_inner_iterations = 40;
  const OptimizationReport a = clothopt::optimize(compiled, init, config);
  const OptimizationReport b = clothopt::optimize(compiled, init, config);
  REQUIRE(a.rounds.size() == b.rounds.size());
  for (size_t r = 0; r < a.rounds.size(); ++r) {
    CHECK(a.rounds[r].phi == b.rounds[r].phi);
    CHECK(a.rounds[r].penalty_weight == b.rounds[r].penalty_weight);
    CHECK(a.rounds[r].inner_iterations == b.rounds[r].inner_iterations);
  }
  REQUIRE(a.best_controls.horizon() == b.best_controls.horizon());
  for (int t = 0; t < a.best_controls.horizon(); ++t) {
    for (int k = 0; k < a.best_controls.point_count(); ++k) {
      CHECK(a.best_controls.displacements[t][k] ==
            b.best_controls.displacements[t][k]);
    }
  }
}

TEST_CASE("optimize: penalty weight grows geometrically while infeasible") {
  // A sphere covering the sheet's whole swing, combined with a gradient
  // tolerance so loose that every inner run returns its starting point
  // untouched: the trajectory never changes, every round stays violated,
  // and mu must scale by the growth factor each time.
  Scene scene = small_swing_scene();
  clothopt::SphereObstacle obstacle;
  obstacle.spheres = {{Vec3(1.0, 0.0, -1.0), 3.0}};
  scene.obstacle = obstacle;
  scene.delta = 0.2;

  const CompiledScene compiled = clothopt::compile_scene(scene);
  const ControlSequence init =
      clothopt::initialize_controls(compiled, compiled.init);
  OptimizerConfig config;
  config.max_outer_rounds = 3;
  config.grad_tol = 1e30;  // freezes the inner solver at its start point
  const OptimizationReport report = clothopt::optimize(compiled, init, config);
  CHECK(report.status == clothopt::ConvergenceStatus::kInfeasible);
  REQUIRE(report.rounds.size() == 3);
  for (size_t r = 0; r < report.rounds.size(); ++r) {
    CHECK(report.rounds[r].penalty_weight ==
          doctest::Approx(config.penalty_init *
                          std::pow(config.penalty_growth,
                                   static_cast<double>(r))));
    CHECK(report.rounds[r].inner_iterations == 0);
    CHECK(report.rounds[r].metrics.safety < -config.feasibility_tol);
  }
  // The returned controls are the (unchanged) least-violation iterate.
  for (int t = 0; t < compiled.horizon; ++t) {
    for (size_t k = 0; k < init.displacements[t].size(); ++k) {
      CHECK(report.best_controls.displacements[t][k] ==
            init.displacements[t][k]);
    }
  }
}

TEST_CASE("optimize: config validation") {
  const Scene scene = small_swing_scene();
  const CompiledScene compiled = clothopt::compile_scene(scene);
  const ControlSequence init =
      clothopt::initialize_controls(compiled, compiled.init);
  OptimizerConfig bad;
  bad.penalty_growth = 1.0;
  CHECK_THROWS_AS(clothopt::optimize(compiled, init, bad),
                  clothopt::ConfigError);

  OptimizerConfig negative;
  negative.feasibility_tol = -1.0;
  CHECK_THROWS_AS(clothopt::optimize(compiled, init, negative),
                  clothopt::ConfigError);
}

TEST_CASE("optimize: mismatched initial controls are rejected") {
  const Scene scene = small_swing_scene();
  const CompiledScene compiled = clothopt::compile_scene(scene);
  const ControlSequence wrong_horizon =
      ControlSequence::zeros(compiled.control_indices, 7);
  CHECK_THROWS_AS(
      clothopt::optimize(compiled, wrong_horizon, OptimizerConfig{}),
      clothopt::ConfigError);
}

TEST_CASE("flatten/unflatten round-trip the control layout") {
  ControlSequence u = ControlSequence::zeros({0, 9}, 3);
  double v = 0.5;
  for (auto& step : u.displacements) {
    for (Vec3& d : step) {
      d = Vec3(v, v + 0.1, v + 0.2);
      v += 1.0;
    }
  }
  const clothopt::VectorXd flat = clothopt::flatten_controls(u);
  REQUIRE(flat.size() == 3 * 2 * 3);
  // Row-major: step, then point, then xyz.
  CHECK(flat[0] == u.displacements[0][0].x());
  CHECK(flat[5] == u.displacements[0][1].z());
  CHECK(flat[6] == u.displacements[1][0].x());

  const ControlSequence back = clothopt::unflatten_controls(flat, {0, 9}, 3);
  for (int t = 0; t < 3; ++t) {
    for (int k = 0; k < 2; ++k) {
      CHECK(back.displacements[t][k] == u.displacements[t][k]);
    }
  }
}
