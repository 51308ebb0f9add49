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

#include "clothopt/safety.h"

#include <algorithm>
#include <limits>

namespace clothopt {

double sdf(const SphereObstacle& obstacle, const Vec3& p) {
  int unused = 0;
  return sdf_with_index(obstacle, p, &unused);
}

double sdf_with_index(const SphereObstacle& obstacle, const Vec3& p,
                      int* sphere_index) {
  if (obstacle.empty()) {
    throw ConfigError("sdf: obstacle has no spheres");
  }
  double best = std::numeric_limits<double>::infinity();
  int best_index = 0;
  for (size_t s = 0; s < obstacle.spheres.size(); ++s) {
    const Sphere& sphere = obstacle.spheres[s];
    const double d = (p - sphere.center).norm() - sphere.radius;
    if (d < best) {
      best = d;
      best_index = static_cast<int>(s);
    }
  }
  *sphere_index = best_index;
  return best;
}

double safety_constraint(const std::vector<State>& states,
                         const SphereObstacle& obstacle, double delta) {
  if (obstacle.empty()) return 0.0;
  double total = 0.0;
  for (size_t t = 1; t < states.size(); ++t) {
    for (const Vec3& p : states[t].positions) {
      const double violation = delta - sdf(obstacle, p);
      if (violation > 0.0) total -= violation;
    }
  }
  return total;
}

std::vector<std::vector<Vec3>> safety_state_adjoints(
    const std::vector<State>& states, const SphereObstacle& obstacle,
    double delta) {
  const int horizon = static_cast<int>(states.size()) - 1;
  std::vector<std::vector<Vec3>> adjoints(horizon);
  for (int t = 0; t < horizon; ++t) {
    const std::vector<Vec3>& positions = states[t + 1].positions;
    adjoints[t].assign(positions.size(), Vec3::Zero());
    if (obstacle.empty()) continue;
    for (size_t i = 0; i < positions.size(); ++i) {
      int index = 0;
      const double d = sdf_with_index(obstacle, positions[i], &index);
      // Strict inequality: exactly at the clearance the hinge contributes
      // nothing and the subgradient is taken as zero.
      if (d >= delta) continue;
      const Vec3 to_center = positions[i] - obstacle.spheres[index].center;
      const double len = to_center.norm();
      // d(sdf)/dx is the unit vector away from the active center; the term
      // -max(0, delta - d) contributes +d(sdf)/dx when active. A particle
      // at the exact center has no defined direction; leave it at zero.
      if (len > 0.0) adjoints[t][i] = to_center / len;
    }
  }
  return adjoints;
}

double min_sdf_over_trajectory(const std::vector<State>& states,
                               const SphereObstacle& obstacle) {
  if (obstacle.empty()) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (size_t t = 1; t < states.size(); ++t) {
    for (const Vec3& p : states[t].positions) {
      best = std::min(best, sdf(obstacle, p));
    }
  }
  return best;
}

SphereObstacle build_u_shape(double depth, double height, double width,
                             int count) {
  if (!(depth > 0.0) || !(height > 0.0) || !(width > 0.0)) {
    throw ConfigError("build_u_shape: dimensions must be positive");
  }
  if (count < 3 || count % 3 != 0) {
    throw ConfigError("build_u_shape: count must be a positive multiple of 3");
  }
  const int per_segment = count / 3;

  std::vector<Vec3> centers;
  centers.reserve(count);
  // Base: evenly spaced across the full width, inclusive of both corners
  // (a single sphere takes the midpoint).
  for (int i = 0; i < per_segment; ++i) {
    const double x = per_segment == 1
                         ? 0.0
                         : -width / 2.0 + width * i / (per_segment - 1);
    centers.push_back(Vec3(x, 0.0, 0.0));
  }
  // Arms: stacked above the corners, topping out at z = height.
  for (int side = 0; side < 2; ++side) {
    const double x = (side == 0 ? -1.0 : 1.0) * width / 2.0;
    for (int i = 0; i < per_segment; ++i) {
      const double z = height * (i + 1) / per_segment;
      centers.push_back(Vec3(x, 0.0, z));
    }
  }

  // The radius must cover the slab thickness and bridge the largest gap
  // between consecutive centers along each segment (corner spheres of the
  // base are arm neighbors as well).
  double max_gap = 0.0;
  if (per_segment > 1) {
    max_gap = std::max(max_gap, width / (per_segment - 1));
  }
  max_gap = std::max(max_gap, height / per_segment);
  if (per_segment == 1) max_gap = std::max(max_gap, width);
  const double radius = std::max(depth / 2.0, max_gap / 2.0);

  SphereObstacle obstacle;
  obstacle.spheres.reserve(count);
  for (const Vec3& c : centers) obstacle.spheres.push_back({c, radius});
  return obstacle;
}

SphereObstacle translate(const SphereObstacle& obstacle, const Vec3& offset) {
  SphereObstacle shifted = obstacle;
  for (Sphere& sphere : shifted.spheres) sphere.center += offset;
  return shifted;
}

}  // namespace clothopt
