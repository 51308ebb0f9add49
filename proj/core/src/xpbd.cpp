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

#include "clothopt/xpbd.h"

#include <string>

namespace clothopt {

ControlSequence ControlSequence::zeros(std::vector<int> indices, int horizon) {
  ControlSequence seq;
  seq.control_indices = std::move(indices);
  seq.displacements.assign(
      horizon, std::vector<Vec3>(seq.control_indices.size(), Vec3::Zero()));
  return seq;
}

ProjectionDelta project_constraint(const Vec3& xi, const Vec3& xj, double d0,
                                   double wi, double wj, double compliance,
                                   double lambda) {
  ProjectionDelta delta;
  const double w_sum = wi + wj;
  if (w_sum <= 0.0) {
    delta.skipped = true;
    return delta;
  }
  const Vec3 diff = xi - xj;
  const double len = diff.norm();
  if (len < kDegenerateLength) {
    delta.skipped = true;
    return delta;
  }
  const double c = len - d0;
  const double dlambda = (-c - compliance * lambda) / (w_sum + compliance);
  const Vec3 dir = diff / len;
  delta.dxi = wi * dlambda * dir;
  delta.dxj = -wj * dlambda * dir;
  delta.dlambda = dlambda;
  return delta;
}

namespace {

// Projects every color set of one constraint group once, accumulating the
// per-constraint multipliers. Within a set the pairs are particle-disjoint,
// so in-place application equals simultaneous application.
void project_group(std::vector<Vec3>& x, const ClothMesh& mesh,
                   const std::vector<ConstraintPair>& pairs,
                   const ColorSets& colors, double compliance,
                   std::vector<double>& lambdas, ConstraintKind kind,
                   StepTape* tape) {
  for (const auto& set : colors) {
    for (int c : set) {
      const ConstraintPair& pair = pairs[c];
      const double wi = mesh.inv_mass[pair.i];
      const double wj = mesh.inv_mass[pair.j];
      const Vec3& xi = x[pair.i];
      const Vec3& xj = x[pair.j];
      const ProjectionDelta delta = project_constraint(
          xi, xj, pair.rest_length, wi, wj, compliance, lambdas[c]);
      if (delta.skipped) continue;
      if (tape != nullptr) {
        tape->projections.push_back(
            {xi, xj, lambdas[c], delta.dlambda, c, kind});
      }
      x[pair.i] += delta.dxi;
      x[pair.j] += delta.dxj;
      lambdas[c] += delta.dlambda;
    }
  }
}

}  // namespace

State step(const State& state, const Control& control, const ClothMesh& mesh,
           const SimParams& params, StepTape* tape, int step_index) {
  State next = state;
  std::vector<Vec3>& x = next.positions;

  const Vec3 gravity_bias = 0.5 * params.gravity * params.dt * params.dt;
  for (size_t i = 0; i < x.size(); ++i) {
    if (mesh.inv_mass[i] > 0.0) x[i] += gravity_bias;
  }

  for (size_t k = 0; k < control.indices.size(); ++k) {
    x[control.indices[k]] += control.displacements[k];
  }
  if (tape != nullptr) {
    tape->control_displacements = control.displacements;
  }

  const double compliance_dist = compliance_from_stiffness(params.k_distance);
  const double compliance_bend = compliance_from_stiffness(params.k_bending);
  std::vector<double> lambda_dist(mesh.distance_pairs.size(), 0.0);
  std::vector<double> lambda_bend(mesh.bending_pairs.size(), 0.0);

  for (int iter = 0; iter < params.iterations; ++iter) {
    if (params.k_distance > 0.0) {
      project_group(x, mesh, mesh.distance_pairs, mesh.distance_colors,
                    compliance_dist, lambda_dist, ConstraintKind::kDistance,
                    tape);
    }
    if (params.k_bending > 0.0) {
      project_group(x, mesh, mesh.bending_pairs, mesh.bending_colors,
                    compliance_bend, lambda_bend, ConstraintKind::kBending,
                    tape);
    }
  }

  for (const Vec3& p : x) {
    if (!p.allFinite()) {
      throw SimulationDivergedError(
          step_index, "simulation diverged at time step " +
                          std::to_string(step_index) +
                          ": non-finite particle position");
    }
  }
  return next;
}

Rollout rollout(const State& x_init, const ControlSequence& controls,
                const ClothMesh& mesh, const SimParams& params, bool record) {
  if (controls.horizon() < 1) {
    throw ConfigError("rollout: control sequence must have T >= 1");
  }
  Rollout result;
  result.controls = controls;
  result.states.reserve(controls.horizon() + 1);
  result.states.push_back(x_init);
  if (record) result.tape.steps.resize(controls.horizon());

  Control per_step;
  per_step.indices = controls.control_indices;
  for (int t = 0; t < controls.horizon(); ++t) {
    per_step.displacements = controls.displacements[t];
    StepTape* tape = record ? &result.tape.steps[t] : nullptr;
    result.states.push_back(
        step(result.states.back(), per_step, mesh, params, tape, t + 1));
  }
  return result;
}

}  // namespace clothopt
