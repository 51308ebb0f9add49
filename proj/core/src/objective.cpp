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

#include "clothopt/objective.h"

#include <cmath>
#include <unordered_set>

namespace clothopt {

void validate_target_spec(const TargetSpec& spec, int particle_count) {
  if (spec.particle_indices.size() != spec.target_positions.size()) {
    throw ConfigError("target spec: index and position counts differ");
  }
  std::unordered_set<int> seen;
  for (int index : spec.particle_indices) {
    if (index < 0 || index >= particle_count) {
      throw ConfigError("target spec: particle index out of range");
    }
    if (!seen.insert(index).second) {
      throw ConfigError("target spec: duplicate particle index");
    }
  }
}

double target_error(const State& final_state, const TargetSpec& spec) {
  double squared = 0.0;
  for (int k = 0; k < spec.count(); ++k) {
    squared += (final_state.positions[spec.particle_indices[k]] -
                spec.target_positions[k])
                   .squaredNorm();
  }
  return std::sqrt(squared);
}

std::vector<Vec3> target_error_adjoint(const State& final_state,
                                       const TargetSpec& spec) {
  std::vector<Vec3> adjoint(final_state.positions.size(), Vec3::Zero());
  const double value = target_error(final_state, spec);
  if (value == 0.0) return adjoint;
  for (int k = 0; k < spec.count(); ++k) {
    const int index = spec.particle_indices[k];
    adjoint[index] =
        (final_state.positions[index] - spec.target_positions[k]) / value;
  }
  return adjoint;
}

double trajectory_irregularity(const ControlSequence& controls) {
  double total = 0.0;
  for (int t = 1; t < controls.horizon(); ++t) {
    double squared = 0.0;
    for (int k = 0; k < controls.point_count(); ++k) {
      squared += (controls.displacements[t][k] - controls.displacements[t - 1][k])
                     .squaredNorm();
    }
    total += std::sqrt(squared);
  }
  return total;
}

std::vector<std::vector<Vec3>> trajectory_irregularity_adjoint(
    const ControlSequence& controls) {
  std::vector<std::vector<Vec3>> adjoint(
      controls.horizon(), std::vector<Vec3>(controls.point_count(), Vec3::Zero()));
  for (int t = 1; t < controls.horizon(); ++t) {
    double squared = 0.0;
    for (int k = 0; k < controls.point_count(); ++k) {
      squared += (controls.displacements[t][k] - controls.displacements[t - 1][k])
                     .squaredNorm();
    }
    const double norm = std::sqrt(squared);
    if (norm == 0.0) continue;
    for (int k = 0; k < controls.point_count(); ++k) {
      const Vec3 unit =
          (controls.displacements[t][k] - controls.displacements[t - 1][k]) /
          norm;
      adjoint[t][k] += unit;
      adjoint[t - 1][k] -= unit;
    }
  }
  return adjoint;
}

namespace {

double group_energy(const std::vector<Vec3>& x,
                    const std::vector<ConstraintPair>& pairs,
                    double stiffness) {
  if (!std::isfinite(stiffness)) return 0.0;
  double total = 0.0;
  for (const ConstraintPair& pair : pairs) {
    const double c = constraint_value(x[pair.i], x[pair.j], pair.rest_length);
    total += 0.5 * stiffness * c * c;
  }
  return total;
}

void add_group_energy_adjoint(const std::vector<Vec3>& x,
                              const std::vector<ConstraintPair>& pairs,
                              double stiffness, std::vector<Vec3>& adjoint) {
  if (!std::isfinite(stiffness)) return;
  for (const ConstraintPair& pair : pairs) {
    const Vec3 diff = x[pair.i] - x[pair.j];
    const double len = diff.norm();
    if (len < kDegenerateLength) continue;
    const Vec3 force = stiffness * (len - pair.rest_length) * (diff / len);
    adjoint[pair.i] += force;
    adjoint[pair.j] -= force;
  }
}

}  // namespace

double potential_energy(const std::vector<State>& states,
                        const ClothMesh& mesh, const SimParams& params) {
  double total = 0.0;
  for (size_t t = 1; t < states.size(); ++t) {
    total += group_energy(states[t].positions, mesh.distance_pairs,
                          params.k_distance);
    total += group_energy(states[t].positions, mesh.bending_pairs,
                          params.k_bending);
  }
  return total;
}

std::vector<std::vector<Vec3>> potential_energy_adjoints(
    const std::vector<State>& states, const ClothMesh& mesh,
    const SimParams& params) {
  const int horizon = static_cast<int>(states.size()) - 1;
  std::vector<std::vector<Vec3>> adjoints(horizon);
  for (int t = 0; t < horizon; ++t) {
    const std::vector<Vec3>& x = states[t + 1].positions;
    adjoints[t].assign(x.size(), Vec3::Zero());
    add_group_energy_adjoint(x, mesh.distance_pairs, params.k_distance,
                             adjoints[t]);
    add_group_energy_adjoint(x, mesh.bending_pairs, params.k_bending,
                             adjoints[t]);
  }
  return adjoints;
}

double total_loss(const std::vector<State>& states,
                  const ControlSequence& controls, const ClothMesh& mesh,
                  const TargetSpec& spec, const ObjectiveWeights& weights,
                  const SimParams& params) {
  return target_error(states.back(), spec) +
         weights.alpha * trajectory_irregularity(controls) +
         weights.beta * potential_energy(states, mesh, params);
}

}  // namespace clothopt
