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

#include <functional>
#include <vector>

#include "clothopt/xpbd.h"

namespace clothopt {

// Adjoints of a scalar with respect to the rollout states and controls.
// state_adjoints[t-1][i] seeds d(scalar)/d(x_i at step t) for t = 1..T;
// control_adjoints holds the direct (explicit) d(scalar)/d(u) part.
struct BackwardSeed {
  std::vector<std::vector<Vec3>> state_adjoints;    // [T][N]
  std::vector<std::vector<Vec3>> control_adjoints;  // [T][points]

  static BackwardSeed zeros(int horizon, int particle_count, int point_count);
};

struct GradientResult {
  double loss = 0.0;
  std::vector<std::vector<Vec3>> d_controls;  // [T][points]
};

// Reverse accumulation through every recorded projection of every time step.
// Only vector-Jacobian products are formed; the full state-vs-control
// Jacobian is never materialized.
GradientResult backward(const Rollout& rollout, const ClothMesh& mesh,
                        const SimParams& params, const BackwardSeed& seed);

// Re-executes the recorded operations in order from the rollout's initial
// state and returns the reproduced state sequence. Each projection input is
// checked against its recorded snapshot; a mismatch raises InternalError.
std::vector<State> replay(const Rollout& rollout, const ClothMesh& mesh,
                          const SimParams& params);

using LossFunction = std::function<double(const ControlSequence&)>;

// Central finite differences of loss_fn at U, one coordinate at a time.
// Verification oracle; never touches the tape machinery.
std::vector<std::vector<Vec3>> finite_difference_gradient(
    const LossFunction& loss_fn, const ControlSequence& u, double h);

}  // namespace clothopt
