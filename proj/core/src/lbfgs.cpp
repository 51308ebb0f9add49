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

#include "clothopt/lbfgs.h"

#include <cmath>
#include <deque>

namespace clothopt {

namespace {

struct CurvaturePair {
  VectorXd s;  // x_{k+1} - x_k
  VectorXd y;  // g_{k+1} - g_k
  double rho = 0.0;
};

// Two-loop recursion: applies the implicit inverse-Hessian estimate built
// from the stored curvature pairs to -gradient.
VectorXd search_direction(const std::deque<CurvaturePair>& history,
                          const VectorXd& gradient) {
  VectorXd q = -gradient;
  if (history.empty()) return q;

  std::vector<double> alpha(history.size());
  for (int i = static_cast<int>(history.size()) - 1; i >= 0; --i) {
    alpha[i] = history[i].rho * history[i].s.dot(q);
    q -= alpha[i] * history[i].y;
  }
  const CurvaturePair& last = history.back();
  q *= last.s.dot(last.y) / last.y.squaredNorm();
  for (size_t i = 0; i < history.size(); ++i) {
    const double beta = history[i].rho * history[i].y.dot(q);
    q += (alpha[i] - beta) * history[i].s;
  }
  return q;
}

struct LineSearchResult {
  bool accepted = false;
  double step = 0.0;
  double value = 0.0;
};

LineSearchResult backtracking_armijo(const ObjectiveFunction& fg,
                                     const VectorXd& x, double value,
                                     const VectorXd& direction,
                                     double directional_derivative,
                                     VectorXd& trial_gradient,
                                     VectorXd& trial_x,
                                     const LbfgsOptions& options) {
  double step = 1.0;
  for (int b = 0; b <= options.max_backtracks; ++b) {
    trial_x = x + step * direction;
    const double trial_value = fg(trial_x, trial_gradient);
    if (std::isfinite(trial_value) &&
        trial_value <=
            value + options.armijo_c * step * directional_derivative) {
      return {true, step, trial_value};
    }
    step *= 0.5;
  }
  return {false, 0.0, value};
}

}  // namespace

LbfgsResult lbfgs_minimize(const ObjectiveFunction& fg, const VectorXd& x0,
                           const LbfgsOptions& options) {
  if (options.max_iterations < 1 || options.history_size < 1 ||
      options.max_backtracks < 0 || !(options.grad_tol > 0.0) ||
      !(options.armijo_c > 0.0)) {
    throw ConfigError("lbfgs: invalid options");
  }

  LbfgsResult result;
  result.x = x0;
  result.gradient.resize(x0.size());
  result.value = fg(result.x, result.gradient);
  if (!std::isfinite(result.value)) {
    throw InternalError("lbfgs: objective non-finite at the starting point");
  }
  result.value_history.push_back(result.value);

  std::deque<CurvaturePair> history;
  VectorXd trial_x(x0.size());
  VectorXd trial_gradient(x0.size());

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (result.gradient.cwiseAbs().maxCoeff() <= options.grad_tol) {
      result.stop = LbfgsStop::kGradientTolerance;
      return result;
    }

    VectorXd direction = search_direction(history, result.gradient);
    double slope = direction.dot(result.gradient);
    // The quasi-Newton model can propose an ascent direction when the
    // objective has hinge kinks; fall back to steepest descent.
    if (!(slope < 0.0)) {
      history.clear();
      direction = -result.gradient;
      slope = direction.dot(result.gradient);
    }

    LineSearchResult ls =
        backtracking_armijo(fg, result.x, result.value, direction, slope,
                            trial_gradient, trial_x, options);
    if (!ls.accepted && !history.empty()) {
      // Retry once along steepest descent with fresh curvature history.
      history.clear();
      direction = -result.gradient;
      slope = direction.dot(result.gradient);
      ls = backtracking_armijo(fg, result.x, result.value, direction, slope,
                               trial_gradient, trial_x, options);
    }
    if (!ls.accepted) {
      result.stop = LbfgsStop::kLineSearchFailed;
      return result;
    }

    CurvaturePair pair;
    pair.s = trial_x - result.x;
    pair.y = trial_gradient - result.gradient;
    const double sy = pair.s.dot(pair.y);

    result.x.swap(trial_x);
    result.gradient.swap(trial_gradient);
    result.value = ls.value;
    result.value_history.push_back(result.value);
    result.iterations = iter + 1;

    // Keep only pairs with usable positive curvature.  On non-positive
    // curvature the whole history is dropped, not just the new pair:
    // retaining the old pairs would freeze the inverse-Hessian model in a
    // region it no longer describes, and the model would keep proposing
    // the same shallow direction without ever learning otherwise.
    if (sy > 1e-12 * pair.s.norm() * pair.y.norm() && sy > 0.0) {
      pair.rho = 1.0 / sy;
      history.push_back(std::move(pair));
      if (static_cast<int>(history.size()) > options.history_size) {
        history.pop_front();
      }
    } else {
      history.clear();
    }
  }
  if (result.gradient.cwiseAbs().maxCoeff() <= options.grad_tol) {
    result.stop = LbfgsStop::kGradientTolerance;
  } else {
    result.stop = LbfgsStop::kMaxIterations;
  }
  return result;
}

}  // namespace clothopt
