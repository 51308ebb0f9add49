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

#include "clothopt/diff.h"

#include <cstring>
#include <string>

namespace clothopt {

BackwardSeed BackwardSeed::zeros(int horizon, int particle_count,
                                 int point_count) {
  BackwardSeed seed;
  seed.state_adjoints.assign(horizon,
                             std::vector<Vec3>(particle_count, Vec3::Zero()));
  seed.control_adjoints.assign(horizon,
                               std::vector<Vec3>(point_count, Vec3::Zero()));
  return seed;
}

namespace {

// Adjoint of one projection. Forward map, with v = xi - xj, len = |v|,
// n = v/len, s = wi + wj + compliance:
//   dl     = (-(len - d0) - compliance*lambda) / s
//   xi'    = xi + wi*dl*n
//   xj'    = xj - wj*dl*n
//   lambda'= lambda + dl
// With g = d(dl)/d(xi) = -n/s, gl = d(dl)/d(lambda) = -compliance/s and
// P = (I - n n^T)/len, the reverse update for output adjoints (ai, aj, al) is
//   sigma = wi*(n.ai) - wj*(n.aj) + al
//   pv    = dl * P * (wi*ai - wj*aj)
//   xi_adj = ai + sigma*g + pv
//   xj_adj = aj - sigma*g - pv
//   lambda_adj = al + gl*sigma
void reverse_projection(const ProjectionRecord& rec, double wi, double wj,
                        double compliance, std::vector<Vec3>& x_adj,
                        std::vector<double>& lambda_adj, int i, int j) {
  const Vec3 diff = rec.xi - rec.xj;
  const double len = diff.norm();
  const Vec3 n = diff / len;
  const double s = wi + wj + compliance;

  const Vec3 ai = x_adj[i];
  const Vec3 aj = x_adj[j];
  const double al = lambda_adj[rec.pair_index];

  const double sigma = wi * n.dot(ai) - wj * n.dot(aj) + al;
  const Vec3 m = wi * ai - wj * aj;
  const Vec3 pv = (rec.dlambda / len) * (m - n * n.dot(m));
  const Vec3 g = -n / s;
  const double gl = -compliance / s;

  x_adj[i] = ai + sigma * g + pv;
  x_adj[j] = aj - sigma * g - pv;
  lambda_adj[rec.pair_index] = al + gl * sigma;
}

}  // namespace

GradientResult backward(const Rollout& rollout, const ClothMesh& mesh,
                        const SimParams& params, const BackwardSeed& seed) {
  const int horizon = rollout.horizon();
  const int n = mesh.particle_count();
  const int points = rollout.controls.point_count();
  if (static_cast<int>(rollout.tape.steps.size()) != horizon) {
    throw InternalError("backward: rollout has no complete tape");
  }
  if (static_cast<int>(seed.state_adjoints.size()) != horizon ||
      static_cast<int>(seed.control_adjoints.size()) != horizon) {
    throw InternalError("backward: seed shape does not match rollout");
  }

  GradientResult result;
  result.d_controls.assign(horizon, std::vector<Vec3>(points, Vec3::Zero()));

  const double compliance_dist = compliance_from_stiffness(params.k_distance);
  const double compliance_bend = compliance_from_stiffness(params.k_bending);

  std::vector<Vec3> x_adj(n, Vec3::Zero());
  std::vector<double> lambda_dist_adj(mesh.distance_pairs.size(), 0.0);
  std::vector<double> lambda_bend_adj(mesh.bending_pairs.size(), 0.0);

  for (int t = horizon - 1; t >= 0; --t) {
    const std::vector<Vec3>& state_seed = seed.state_adjoints[t];
    if (static_cast<int>(state_seed.size()) != n) {
      throw InternalError("backward: state adjoint size mismatch");
    }
    for (int i = 0; i < n; ++i) x_adj[i] += state_seed[i];

    // The multipliers are discarded at the end of each step, so their
    // adjoints start at zero here.
    std::fill(lambda_dist_adj.begin(), lambda_dist_adj.end(), 0.0);
    std::fill(lambda_bend_adj.begin(), lambda_bend_adj.end(), 0.0);

    const StepTape& tape = rollout.tape.steps[t];
    for (auto it = tape.projections.rbegin(); it != tape.projections.rend();
         ++it) {
      const ProjectionRecord& rec = *it;
      const bool is_dist = rec.kind == ConstraintKind::kDistance;
      const ConstraintPair& pair = is_dist
                                       ? mesh.distance_pairs[rec.pair_index]
                                       : mesh.bending_pairs[rec.pair_index];
      reverse_projection(rec, mesh.inv_mass[pair.i], mesh.inv_mass[pair.j],
                         is_dist ? compliance_dist : compliance_bend, x_adj,
                         is_dist ? lambda_dist_adj : lambda_bend_adj, pair.i,
                         pair.j);
    }

    // Control application x[c] += u: the control inherits the particle's
    // adjoint, which itself flows through to the previous state unchanged.
    // The gravity bias is constant and needs no reverse step.
    for (int k = 0; k < points; ++k) {
      result.d_controls[t][k] =
          x_adj[rollout.controls.control_indices[k]] + seed.control_adjoints[t][k];
    }
  }
  return result;
}

std::vector<State> replay(const Rollout& rollout, const ClothMesh& mesh,
                          const SimParams& params) {
  const int horizon = rollout.horizon();
  if (static_cast<int>(rollout.tape.steps.size()) != horizon) {
    throw InternalError("replay: rollout has no complete tape");
  }
  const double compliance_dist = compliance_from_stiffness(params.k_distance);
  const double compliance_bend = compliance_from_stiffness(params.k_bending);

  std::vector<State> states;
  states.reserve(horizon + 1);
  states.push_back(rollout.states[0]);

  const Vec3 gravity_bias = 0.5 * params.gravity * params.dt * params.dt;
  std::vector<double> lambda_dist(mesh.distance_pairs.size(), 0.0);
  std::vector<double> lambda_bend(mesh.bending_pairs.size(), 0.0);

  for (int t = 0; t < horizon; ++t) {
    State current = states.back();
    std::vector<Vec3>& x = current.positions;
    for (size_t i = 0; i < x.size(); ++i) {
      if (mesh.inv_mass[i] > 0.0) x[i] += gravity_bias;
    }
    const StepTape& tape = rollout.tape.steps[t];
    for (size_t k = 0; k < rollout.controls.control_indices.size(); ++k) {
      x[rollout.controls.control_indices[k]] += tape.control_displacements[k];
    }
    std::fill(lambda_dist.begin(), lambda_dist.end(), 0.0);
    std::fill(lambda_bend.begin(), lambda_bend.end(), 0.0);

    for (const ProjectionRecord& rec : tape.projections) {
      const bool is_dist = rec.kind == ConstraintKind::kDistance;
      const ConstraintPair& pair = is_dist
                                       ? mesh.distance_pairs[rec.pair_index]
                                       : mesh.bending_pairs[rec.pair_index];
      std::vector<double>& lambdas = is_dist ? lambda_dist : lambda_bend;
      if (std::memcmp(x[pair.i].data(), rec.xi.data(), sizeof(double) * 3) !=
              0 ||
          std::memcmp(x[pair.j].data(), rec.xj.data(), sizeof(double) * 3) !=
              0) {
        throw InternalError("replay: state diverged from recorded snapshot at "
                            "time step " +
                            std::to_string(t + 1));
      }
      const ProjectionDelta delta = project_constraint(
          x[pair.i], x[pair.j], pair.rest_length, mesh.inv_mass[pair.i],
          mesh.inv_mass[pair.j], is_dist ? compliance_dist : compliance_bend,
          lambdas[rec.pair_index]);
      x[pair.i] += delta.dxi;
      x[pair.j] += delta.dxj;
      lambdas[rec.pair_index] += delta.dlambda;
    }
    states.push_back(std::move(current));
  }
  return states;
}

std::vector<std::vector<Vec3>> finite_difference_gradient(
    const LossFunction& loss_fn, const ControlSequence& u, double h) {
  if (!(h > 0.0)) {
    throw ConfigError("finite_difference_gradient: h must be positive");
  }
  std::vector<std::vector<Vec3>> grad(
      u.horizon(), std::vector<Vec3>(u.point_count(), Vec3::Zero()));
  ControlSequence probe = u;
  for (int t = 0; t < u.horizon(); ++t) {
    for (int k = 0; k < u.point_count(); ++k) {
      for (int d = 0; d < 3; ++d) {
        const double original = probe.displacements[t][k][d];
        probe.displacements[t][k][d] = original + h;
        const double plus = loss_fn(probe);
        probe.displacements[t][k][d] = original - h;
        const double minus = loss_fn(probe);
        probe.displacements[t][k][d] = original;
        grad[t][k][d] = (plus - minus) / (2.0 * h);
      }
    }
  }
  return grad;
}

}  // namespace clothopt
