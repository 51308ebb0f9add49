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

#include "clothopt/optimize.h"

#include <limits>

namespace clothopt {

ControlSequence initialize_controls(const CompiledScene& scene,
                                    InitStrategy strategy) {
  ControlSequence controls =
      ControlSequence::zeros(scene.control_indices, scene.horizon);
  if (strategy == InitStrategy::kZeros || scene.target.count() == 0) {
    return controls;
  }
  // The goal position for each control point is its start offset by the
  // translation that best aligns the targeted particles with their targets
  // (the least-squares rigid translation, i.e. the mean required
  // displacement).  Driving a control point toward a raw target position
  // would not generally bring the targeted particles to their targets.
  Vec3 mean_displacement = Vec3::Zero();
  for (int j = 0; j < scene.target.count(); ++j) {
    const int particle = scene.target.particle_indices[j];
    mean_displacement += scene.target.target_positions[j] -
                         scene.initial_state.positions[particle];
  }
  mean_displacement /= static_cast<double>(scene.target.count());
  const Vec3 per_step = mean_displacement / static_cast<double>(scene.horizon);
  for (int t = 0; t < scene.horizon; ++t) {
    for (size_t k = 0; k < scene.control_indices.size(); ++k) {
      controls.displacements[t][k] = per_step;
    }
  }
  return controls;
}

OptimizationReport optimize(const CompiledScene& scene,
                            const ControlSequence& u_init,
                            const OptimizerConfig& config) {
  if (config.max_outer_rounds < 1 || !(config.penalty_init > 0.0) ||
      !(config.penalty_growth > 1.0) || !(config.feasibility_tol > 0.0)) {
    throw ConfigError("optimize: invalid optimizer configuration");
  }
  if (u_init.horizon() != scene.horizon ||
      u_init.control_indices != scene.control_indices) {
    throw ConfigError("optimize: initial controls do not match the scene");
  }

  LbfgsOptions inner_options;
  inner_options.max_iterations = config.max_inner_iterations;
  inner_options.history_size = config.history_size;
  inner_options.grad_tol = config.grad_tol;

  OptimizationReport report;
  ControlSequence current = u_init;
  double mu = config.penalty_init;
  double best_safety = -std::numeric_limits<double>::infinity();

  for (int round = 0; round < config.max_outer_rounds; ++round) {
    const double round_mu = mu;
    const ObjectiveFunction fg = [&scene, round_mu](const VectorXd& x,
                                                    VectorXd& gradient) {
      const ControlSequence u =
          unflatten_controls(x, scene.control_indices, scene.horizon);
      const PenalizedEvaluation eval = evaluate_penalized(scene, u, round_mu);
      gradient = flatten_controls(ControlSequence{
          scene.control_indices, eval.d_controls});
      return eval.phi;
    };

    const LbfgsResult inner =
        lbfgs_minimize(fg, flatten_controls(current), inner_options);
    current = unflatten_controls(inner.x, scene.control_indices, scene.horizon);

    const Rollout rolled = rollout(scene.initial_state, current, scene.mesh,
                                   scene.params, /*record=*/false);
    RoundRecord record;
    record.penalty_weight = round_mu;
    record.phi = inner.value;
    record.metrics = evaluate_metrics(scene, rolled.states, current);
    record.inner_iterations = inner.iterations;
    record.inner_stop = inner.stop;
    record.phi_history = inner.value_history;
    report.rounds.push_back(std::move(record));

    // Keep the least-violating iterate in case every round stays
    // infeasible; strictly-better only, so earlier rounds win ties.
    if (report.rounds.back().metrics.safety > best_safety) {
      best_safety = report.rounds.back().metrics.safety;
      report.best_controls = current;
    }

    if (report.rounds.back().metrics.safety >= -config.feasibility_tol) {
      report.status = ConvergenceStatus::kFeasible;
      report.best_controls = current;
      return report;
    }
    mu *= config.penalty_growth;
  }
  report.status = ConvergenceStatus::kInfeasible;
  return report;
}

OptimizationReport optimize(const Scene& scene, const ControlSequence& u_init,
                            const OptimizerConfig& config) {
  return optimize(compile_scene(scene), u_init, config);
}

}  // namespace clothopt
