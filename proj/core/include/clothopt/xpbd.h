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

#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "clothopt/mesh.h"
#include "clothopt/types.h"

namespace clothopt {

// Positions of all particles at one time step.
struct State {
  std::vector<Vec3> positions;
};

struct SimParams {
  Vec3 gravity{0.0, 0.0, -9.8};
  double dt = 0.1;
  int iterations = 100;
  double k_distance = 1e4;  // may be +inf for a hard constraint
  double k_bending = 1e2;
};

// Displacements applied to specific particles in one step.
struct Control {
  std::vector<int> indices;
  std::vector<Vec3> displacements;
};

// T displacement vectors per control point; the optimization variable.
struct ControlSequence {
  std::vector<int> control_indices;
  std::vector<std::vector<Vec3>> displacements;  // [t][point]

  int horizon() const { return static_cast<int>(displacements.size()); }
  int point_count() const { return static_cast<int>(control_indices.size()); }

  static ControlSequence zeros(std::vector<int> indices, int horizon);
};

// Particles closer than this are treated as coincident and their constraint
// is skipped for the iteration.
inline constexpr double kDegenerateLength = 1e-9;

/// Quasi-static compliance for stiffness k: 1/k, with k = +inf meaning a hard
// constraint (compliance 0). k = 0 disables the constraint group.
inline double compliance_from_stiffness(double k) {
  if (std::isinf(k)) return 0.0;
  return 1.0 / k;
}

inline double constraint_value(const Vec3& xi, const Vec3& xj, double d0) {
  return (xi - xj).norm() - d0;
}

struct ProjectionDelta {
  Vec3 dxi = Vec3::Zero();
  Vec3 dxj = Vec3::Zero();
  double dlambda = 0.0;
  bool skipped = false;
};

// One XPBD position correction. lambda is the multiplier accumulated over the
// iteration loop of the current step.
ProjectionDelta project_constraint(const Vec3& xi, const Vec3& xj, double d0,
                                   double wi, double wj, double compliance,
                                   double lambda);

// Constraint group a tape entry belongs to.
enum class ConstraintKind : int { kDistance = 0, kBending = 1 };

// Input snapshot of one executed projection, sufficient to replay it and to
// evaluate its local Jacobian in reverse.
struct ProjectionRecord {
  Vec3 xi;
  Vec3 xj;
  double lambda_in;
  double dlambda;
  int pair_index;
  ConstraintKind kind;
};

// Elementary operations of one time step, in execution order. Gravity and
// control application are implied by mesh/params plus the stored control.
struct StepTape {
  std::vector<Vec3> control_displacements;
  std::vector<ProjectionRecord> projections;
};

struct Tape {
  std::vector<StepTape> steps;
};

// State sequence of a forward pass plus the tape needed to back-propagate.
// states[0] is the initial state; states[t] for t >= 1 are step outputs.
struct Rollout {
  std::vector<State> states;
  ControlSequence controls;
  Tape tape;

  int horizon() const { return static_cast<int>(states.size()) - 1; }
};

// One quasi-static step: gravity bias on free particles, exact control
// displacement, then `iterations` Gauss-Seidel rounds over the color sets
// (distance sets first, bending sets second). Records onto `tape` when given.
// step_index is used only for error reporting.
State step(const State& state, const Control& control, const ClothMesh& mesh,
           const SimParams& params, StepTape* tape = nullptr,
           int step_index = 0);

// Chains `step` over the whole control sequence. record=false skips the tape
// (cheap forward evaluation for line searches and finite differences).
Rollout rollout(const State& x_init, const ControlSequence& controls,
                const ClothMesh& mesh, const SimParams& params,
                bool record = true);

}  // namespace clothopt
