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

#include "clothopt/evaluator.h"

namespace clothopt {

CompiledScene compile_scene(const Scene& scene) {
  validate_scene(scene);

  CompiledScene compiled;
  compiled.mesh = build_grid(scene.mesh.rows, scene.mesh.cols,
                             scene.mesh.spacing, scene.mesh.origin,
                             axis_from_token(scene.mesh.col_axis),
                             axis_from_token(scene.mesh.row_axis));
  pin_particles(compiled.mesh, scene.control_points);
  compiled.initial_state.positions = compiled.mesh.rest_positions;
  compiled.control_indices = scene.control_points;
  compiled.horizon = scene.horizon;
  compiled.params = scene.sim;
  compiled.target = scene.target;
  if (scene.obstacle) {
    compiled.obstacle = *scene.obstacle;
    compiled.delta = *scene.delta;
  }
  compiled.weights = scene.weights;
  compiled.init = scene.init;
  return compiled;
}

Metrics evaluate_metrics(const CompiledScene& scene,
                         const std::vector<State>& states,
                         const ControlSequence& controls) {
  Metrics metrics;
  metrics.target_error = target_error(states.back(), scene.target);
  metrics.irregularity = trajectory_irregularity(controls);
  metrics.energy = potential_energy(states, scene.mesh, scene.params);
  metrics.safety = safety_constraint(states, scene.obstacle, scene.delta);
  metrics.min_sdf = min_sdf_over_trajectory(states, scene.obstacle);
  metrics.loss = metrics.target_error +
                 scene.weights.alpha * metrics.irregularity +
                 scene.weights.beta * metrics.energy;
  return metrics;
}

PenalizedEvaluation evaluate_penalized(const CompiledScene& scene,
                                       const ControlSequence& controls,
                                       double mu) {
  const Rollout rolled = rollout(scene.initial_state, controls, scene.mesh,
                                 scene.params, /*record=*/true);

  PenalizedEvaluation eval;
  eval.metrics = evaluate_metrics(scene, rolled.states, controls);
  // C <= 0 by construction, so the hinge is just -C and phi is smooth in C.
  eval.phi = eval.metrics.loss + mu * eval.metrics.safety * eval.metrics.safety;

  const int n = scene.mesh.particle_count();
  BackwardSeed seed = BackwardSeed::zeros(
      scene.horizon, n, static_cast<int>(scene.control_indices.size()));

  const std::vector<Vec3> target_adj =
      target_error_adjoint(rolled.states.back(), scene.target);
  for (int i = 0; i < n; ++i) {
    seed.state_adjoints[scene.horizon - 1][i] += target_adj[i];
  }

  const double beta = scene.weights.beta;
  if (beta != 0.0) {
    const std::vector<std::vector<Vec3>> energy_adj =
        potential_energy_adjoints(rolled.states, scene.mesh, scene.params);
    for (int t = 0; t < scene.horizon; ++t) {
      for (int i = 0; i < n; ++i) {
        seed.state_adjoints[t][i] += beta * energy_adj[t][i];
      }
    }
  }

  const double penalty_scale = 2.0 * mu * eval.metrics.safety;
  if (scene.constrained() && penalty_scale != 0.0) {
    const std::vector<std::vector<Vec3>> safety_adj =
        safety_state_adjoints(rolled.states, scene.obstacle, scene.delta);
    for (int t = 0; t < scene.horizon; ++t) {
      for (int i = 0; i < n; ++i) {
        seed.state_adjoints[t][i] += penalty_scale * safety_adj[t][i];
      }
    }
  }

  const double alpha = scene.weights.alpha;
  if (alpha != 0.0) {
    const std::vector<std::vector<Vec3>> irregularity_adj =
        trajectory_irregularity_adjoint(controls);
    for (int t = 0; t < scene.horizon; ++t) {
      for (size_t k = 0; k < scene.control_indices.size(); ++k) {
        seed.control_adjoints[t][k] += alpha * irregularity_adj[t][k];
      }
    }
  }

  GradientResult grad = backward(rolled, scene.mesh, scene.params, seed);
  eval.d_controls = std::move(grad.d_controls);
  return eval;
}

VectorXd flatten_controls(const ControlSequence& controls) {
  VectorXd flat(3 * controls.horizon() * controls.point_count());
  int cursor = 0;
  for (int t = 0; t < controls.horizon(); ++t) {
    for (int k = 0; k < controls.point_count(); ++k) {
      for (int d = 0; d < 3; ++d) {
        flat[cursor++] = controls.displacements[t][k][d];
      }
    }
  }
  return flat;
}

ControlSequence unflatten_controls(const VectorXd& flat,
                                   const std::vector<int>& control_indices,
                                   int horizon) {
  const int points = static_cast<int>(control_indices.size());
  if (flat.size() != 3 * horizon * points) {
    throw InternalError("unflatten_controls: size mismatch");
  }
  ControlSequence controls = ControlSequence::zeros(control_indices, horizon);
  int cursor = 0;
  for (int t = 0; t < horizon; ++t) {
    for (int k = 0; k < points; ++k) {
      for (int d = 0; d < 3; ++d) {
        controls.displacements[t][k][d] = flat[cursor++];
      }
    }
  }
  return controls;
}

}  // namespace clothopt
