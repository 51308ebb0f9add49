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

#ifndef CLOTHOPT_EVALUATOR_H_
#define CLOTHOPT_EVALUATOR_H_

#include <vector>

#include "clothopt/diff.h"
#include "clothopt/mesh.h"
#include "clothopt/objective.h"
#include "clothopt/safety.h"
#include "clothopt/scene.h"
#include "clothopt/types.h"
#include "clothopt/xpbd.h"

namespace clothopt {

// A scene resolved into simulation-ready form: grid built, control
// particles pinned, rest state materialized. Immutable once compiled.
struct CompiledScene {
  ClothMesh mesh;
  State initial_state;
  std::vector<int> control_indices;
  int horizon = 0;
  SimParams params;
  TargetSpec target;
  SphereObstacle obstacle;  // empty when the scene is unconstrained
  double delta = 0.0;       // meaningful only when an obstacle is present
  ObjectiveWeights weights;
  InitStrategy init = InitStrategy::kStraightLine;

  bool constrained() const { return !obstacle.empty(); }
};

// Validates and resolves a declarative scene.
CompiledScene compile_scene(const Scene& scene);

// The reported quantities of one trajectory.
struct Metrics {
  double target_error = 0.0;   // G
  double irregularity = 0.0;   // T
  double energy = 0.0;         // E
  double safety = 0.0;         // C, always <= 0
  double min_sdf = 0.0;        // +infinity when unconstrained
  double loss = 0.0;           // G + alpha*T + beta*E
};

Metrics evaluate_metrics(const CompiledScene& scene,
                         const std::vector<State>& states,
                         const ControlSequence& controls);

// One evaluation of the penalized objective
//   phi(U) = L(X(U), U) + mu * ReLU(-C(X(U)))^2
// together with its gradient with respect to every control displacement.
struct PenalizedEvaluation {
  double phi = 0.0;
  Metrics metrics;
  std::vector<std::vector<Vec3>> d_controls;
};

PenalizedEvaluation evaluate_penalized(const CompiledScene& scene,
                                       const ControlSequence& controls,
                                       double mu);

// Row-major flattening (time step, then control point, then xyz); the
// layout shared by the optimizer and the finite-difference oracle.
VectorXd flatten_controls(const ControlSequence& controls);
ControlSequence unflatten_controls(const VectorXd& flat,
                                   const std::vector<int>& control_indices,
                                   int horizon);

}  // namespace clothopt

#endif  // CLOTHOPT_EVALUATOR_H_
