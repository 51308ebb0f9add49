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

#ifndef CLOTHOPT_OBJECTIVE_H_
#define CLOTHOPT_OBJECTIVE_H_

#include <vector>

#include "clothopt/mesh.h"
#include "clothopt/types.h"
#include "clothopt/xpbd.h"

namespace clothopt {

// Which particles should land where at the end of the horizon.
struct TargetSpec {
  std::vector<int> particle_indices;
  std::vector<Vec3> target_positions;

  int count() const { return static_cast<int>(particle_indices.size()); }
};

// Throws ConfigError unless indices are distinct, in range, and matched
// one-to-one with target positions.
void validate_target_spec(const TargetSpec& spec, int particle_count);

// Scaling coefficients of the two regularization terms in the total loss.
struct ObjectiveWeights {
  double alpha = 1.0;   // scales trajectory irregularity
  double beta = 1e-4;   // scales deformation energy
};

// Target error G: the L2 norm of the flattened residual between the
// selected particles of the final state and their targets, taken jointly
// over all selected particles.
double target_error(const State& final_state, const TargetSpec& spec);

// Adjoint of target_error with respect to the final state, sized to the
// full particle set (zero off the selected indices). The subgradient at an
// exact hit (G = 0) is zero.
std::vector<Vec3> target_error_adjoint(const State& final_state,
                                       const TargetSpec& spec);

// Trajectory irregularity T: sum over t = 1..T-1 of the L2 norm of the
// flattened backward difference u^t - u^{t-1}. Zero for a single step.
double trajectory_irregularity(const ControlSequence& controls);

// Adjoint of trajectory_irregularity with respect to every control
// displacement, shaped like ControlSequence::displacements. Zero-norm
// differences take subgradient zero.
std::vector<std::vector<Vec3>> trajectory_irregularity_adjoint(
    const ControlSequence& controls);

// Deformation energy E: sum over states 1..T of ½ Σ_c k_c C_c(x)² with the
// projection stiffnesses broadcast per group (distance and bending jointly).
// Groups with non-finite stiffness are excluded: a hard group keeps its
// constraints at rest and carries no finite elastic energy scale.
double potential_energy(const std::vector<State>& states,
                        const ClothMesh& mesh, const SimParams& params);

// Adjoints of potential_energy with respect to states 1..T; entry [t][i]
// seeds the state at time step t+1. Degenerate (near-zero-length) edges
// contribute subgradient zero.
std::vector<std::vector<Vec3>> potential_energy_adjoints(
    const std::vector<State>& states, const ClothMesh& mesh,
    const SimParams& params);

// Total loss L = G + alpha*T + beta*E.
double total_loss(const std::vector<State>& states,
                  const ControlSequence& controls, const ClothMesh& mesh,
                  const TargetSpec& spec, const ObjectiveWeights& weights,
                  const SimParams& params);

}  // namespace clothopt

#endif  // CLOTHOPT_OBJECTIVE_H_
