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

#ifndef CLOTHOPT_OPTIMIZE_H_
#define CLOTHOPT_OPTIMIZE_H_

#include <vector>

#include "clothopt/evaluator.h"
#include "clothopt/lbfgs.h"
#include "clothopt/scene.h"

namespace clothopt {

struct OptimizerConfig {
  int max_outer_rounds = 6;
  int max_inner_iterations = 200;
  double penalty_init = 10.0;
  double penalty_growth = 10.0;
  double feasibility_tol = 1e-5;
  double grad_tol = 1e-6;
  int history_size = 10;
};

enum class ConvergenceStatus { kFeasible, kInfeasible };

// One outer penalty round: the metrics of its final iterate plus the inner
// solver's convergence trace.
struct RoundRecord {
  double penalty_weight = 0.0;
  double phi = 0.0;  // final penalized objective of the round
  Metrics metrics;
  int inner_iterations = 0;
  LbfgsStop inner_stop = LbfgsStop::kMaxIterations;
  std::vector<double> phi_history;  // initial value plus each accepted step
};

struct OptimizationReport {
  ControlSequence best_controls;
  std::vector<RoundRecord> rounds;
  ConvergenceStatus status = ConvergenceStatus::kInfeasible;

  const RoundRecord& final_round() const { return rounds.back(); }
};

// Produces the starting control sequence. `zeros` holds every control
// point still; `straight-line` moves every control point in equal steps by
// the translation that best aligns the targeted particles with their
// targets (their mean required displacement), and degrades to zeros when
// the scene has no targets.
ControlSequence initialize_controls(const CompiledScene& scene,
                                    InitStrategy strategy);

// Minimizes phi_mu(U) = L + mu * ReLU(-C)^2 with inner quasi-Newton runs,
// growing mu geometrically until the trajectory is feasible
// (C >= -feasibility_tol) or rounds run out. Unconstrained scenes satisfy
// C = 0 identically and finish in one round. On an infeasible exhaustion
// the returned controls are the round iterate with the least violation.
OptimizationReport optimize(const CompiledScene& scene,
                            const ControlSequence& u_init,
                            const OptimizerConfig& config);

// Convenience overload: compiles the scene first.
OptimizationReport optimize(const Scene& scene, const ControlSequence& u_init,
                            const OptimizerConfig& config);

}  // namespace clothopt

#endif  // CLOTHOPT_OPTIMIZE_H_
