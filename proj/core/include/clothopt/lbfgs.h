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

#ifndef CLOTHOPT_LBFGS_H_
#define CLOTHOPT_LBFGS_H_

#include <functional>
#include <vector>

#include "clothopt/types.h"

namespace clothopt {

// Evaluates the objective at `x` and fills `gradient` (same size as x).
using ObjectiveFunction =
    std::function<double(const VectorXd& x, VectorXd& gradient)>;

struct LbfgsOptions {
  int max_iterations = 200;
  int history_size = 10;
  // Convergence threshold on the gradient max-norm.
  double grad_tol = 1e-6;
  // Armijo sufficient-decrease coefficient; step halves on rejection.
  double armijo_c = 1e-4;
  int max_backtracks = 30;
};

// Why an inner run stopped.
enum class LbfgsStop {
  kGradientTolerance,   // gradient max-norm fell below grad_tol
  kMaxIterations,       // iteration budget exhausted
  kLineSearchFailed,    // no acceptable step even along steepest descent
};

struct LbfgsResult {
  VectorXd x;
  double value = 0.0;
  VectorXd gradient;
  int iterations = 0;
  LbfgsStop stop = LbfgsStop::kMaxIterations;
  // Objective value at the start plus after each accepted step.
  std::vector<double> value_history;
};

// Limited-memory BFGS with backtracking Armijo line search. Deterministic:
// no randomness, fixed evaluation order. Accepted steps never increase the
// objective. Trial points with non-finite value are rejected like Armijo
// failures, so the iterate stays finite; a non-finite value at x0 itself
// is an internal error.
LbfgsResult lbfgs_minimize(const ObjectiveFunction& fg, const VectorXd& x0,
                           const LbfgsOptions& options);

}  // namespace clothopt

#endif  // CLOTHOPT_LBFGS_H_
