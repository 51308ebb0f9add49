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

#ifndef CLOTHOPT_SAFETY_H_
#define CLOTHOPT_SAFETY_H_

#include <vector>

#include "clothopt/types.h"
#include "clothopt/xpbd.h"

namespace clothopt {

// One sphere of the obstacle. Radii must be positive.
struct Sphere {
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
};

// An obstacle modeled as a union of spheres. The signed distance of the
// union is the minimum of the member distances; an empty obstacle means
// free space everywhere (the trajectory is unconstrained).
struct SphereObstacle {
  std::vector<Sphere> spheres;

  bool empty() const { return spheres.empty(); }
};

// Signed distance from `p` to the obstacle surface: negative inside,
// positive outside. Requires a non-empty obstacle.
double sdf(const SphereObstacle& obstacle, const Vec3& p);

// As above, also reporting which sphere attains the minimum (the
// lowest-index sphere on ties). Used to propagate the subgradient.
double sdf_with_index(const SphereObstacle& obstacle, const Vec3& p,
                      int* sphere_index);

// Aggregate safety value over states 1..T (the initial state is the given
// configuration and is not chargeable):
//   C = sum_t sum_i -max(0, delta - sdf(x_i^t))
// Always <= 0; equals 0 exactly when every particle keeps clearance delta.
// An empty obstacle yields 0.
double safety_constraint(const std::vector<State>& states,
                         const SphereObstacle& obstacle, double delta);

// Adjoints of `safety_constraint` with respect to the positions in states
// 1..T. Entry [t][i] seeds the state at time step t+1. Particles at the
// clearance kink or on a sphere-distance tie take the one-sided rule that
// matches `safety_constraint` (zero at the kink, lowest-index sphere).
std::vector<std::vector<Vec3>> safety_state_adjoints(
    const std::vector<State>& states, const SphereObstacle& obstacle,
    double delta);

// Minimum signed distance over all particles of states 1..T. Reported as a
// diagnostic; +infinity for an empty obstacle.
double min_sdf_over_trajectory(const std::vector<State>& states,
                               const SphereObstacle& obstacle);

// Builds a U-shaped obstacle in canonical pose: the U lies in the x-z
// plane (y = 0) opening towards +z, base centered on the origin. `count`
// spheres are split evenly between the base and the two arms, so it must
// be a multiple of 3 and at least 3. Base spheres run left to right along
// x in [-width/2, width/2]; each arm stacks spheres at x = -/+ width/2
// with tops reaching z = height. The common radius is max(depth/2, half
// the largest center gap), which keeps the union free of holes. Sphere
// order: base left to right, then left arm bottom to top, then right arm
// bottom to top.
SphereObstacle build_u_shape(double depth, double height, double width,
                             int count);

// Returns a copy of the obstacle with every center shifted by `offset`.
SphereObstacle translate(const SphereObstacle& obstacle, const Vec3& offset);

}  // namespace clothopt

#endif  // CLOTHOPT_SAFETY_H_
