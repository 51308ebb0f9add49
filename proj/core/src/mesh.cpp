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

#include "clothopt/mesh.h"

#include <algorithm>
#include <map>
#include <utility>

namespace clothopt {

namespace {

std::pair<int, int> sorted_edge(int a, int b) {
  return {std::min(a, b), std::max(a, b)};
}

}  // namespace

ClothMesh build_grid(int n_rows, int n_cols, double spacing, const Vec3& origin,
                     const Vec3& col_axis, const Vec3& row_axis) {
  if (n_rows < 2 || n_cols < 2) {
    throw ConfigError("build_grid: grid dimensions must be at least 2x2");
  }
  if (!(spacing > 0.0)) {
    throw ConfigError("build_grid: spacing must be positive");
  }
  if (col_axis.cross(row_axis).norm() < 1e-12) {
    throw ConfigError("build_grid: orientation axes must span a plane");
  }

  ClothMesh mesh;
  mesh.n_rows = n_rows;
  mesh.n_cols = n_cols;
  mesh.spacing = spacing;

  mesh.rest_positions.reserve(static_cast<size_t>(n_rows) * n_cols);
  for (int r = 0; r < n_rows; ++r) {
    for (int c = 0; c < n_cols; ++c) {
      mesh.rest_positions.push_back(origin + c * spacing * col_axis +
                                    r * spacing * row_axis);
    }
  }

  // Two triangles per cell, diagonal from (r,c) to (r+1,c+1).
  for (int r = 0; r + 1 < n_rows; ++r) {
    for (int c = 0; c + 1 < n_cols; ++c) {
      const int a = mesh.index_of(r, c);
      const int b = mesh.index_of(r + 1, c);
      const int d = mesh.index_of(r + 1, c + 1);
      const int e = mesh.index_of(r, c + 1);
      mesh.triangles.push_back({a, b, d});
      mesh.triangles.push_back({a, d, e});
    }
  }

  auto rest_length = [&mesh](int i, int j) {
    return (mesh.rest_positions[i] - mesh.rest_positions[j]).norm();
  };

  // Distance constraints: unique edges, in first-occurrence order. Shared
  // edges also collect the opposite vertex of each incident triangle for the
  // bending pass below.
  std::map<std::pair<int, int>, int> edge_slot;
  std::vector<std::vector<int>> edge_opposites;
  for (const auto& tri : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      const int i = tri[k];
      const int j = tri[(k + 1) % 3];
      const int opposite = tri[(k + 2) % 3];
      const auto key = sorted_edge(i, j);
      auto it = edge_slot.find(key);
      if (it == edge_slot.end()) {
        edge_slot.emplace(key, static_cast<int>(mesh.distance_pairs.size()));
        mesh.distance_pairs.push_back(
            {key.first, key.second, rest_length(key.first, key.second)});
        edge_opposites.push_back({opposite});
      } else {
        edge_opposites[it->second].push_back(opposite);
      }
    }
  }

  // Bending constraints: for each interior edge, the two opposite vertices.
  for (size_t e = 0; e < edge_opposites.size(); ++e) {
    const auto& opp = edge_opposites[e];
    if (opp.size() == 2) {
      const auto key = sorted_edge(opp[0], opp[1]);
      mesh.bending_pairs.push_back(
          {key.first, key.second, rest_length(key.first, key.second)});
    }
  }

  mesh.distance_colors = color_constraints(mesh.distance_pairs);
  mesh.bending_colors = color_constraints(mesh.bending_pairs);

  mesh.inv_mass.assign(mesh.rest_positions.size(), 1.0);
  return mesh;
}

ColorSets color_constraints(std::span<const ConstraintPair> pairs) {
  if (pairs.empty()) {
    throw ConfigError("color_constraints: constraint list is empty");
  }
  ColorSets sets;
  // Particles already used by each set.
  std::vector<std::vector<char>> used;
  int max_index = 0;
  for (const auto& p : pairs) {
    if (p.i < 0 || p.j < 0 || p.i == p.j) {
      throw ConfigError("color_constraints: invalid particle pair");
    }
    max_index = std::max({max_index, p.i, p.j});
  }
  for (int c = 0; c < static_cast<int>(pairs.size()); ++c) {
    const auto& p = pairs[c];
    size_t set_index = 0;
    for (; set_index < sets.size(); ++set_index) {
      if (!used[set_index][p.i] && !used[set_index][p.j]) break;
    }
    if (set_index == sets.size()) {
      sets.emplace_back();
      used.emplace_back(max_index + 1, 0);
    }
    sets[set_index].push_back(c);
    used[set_index][p.i] = 1;
    used[set_index][p.j] = 1;
  }
  return sets;
}

void pin_particles(ClothMesh& mesh, std::span<const int> indices) {
  for (int idx : indices) {
    if (idx < 0 || idx >= mesh.particle_count()) {
      throw ConfigError("pin_particles: particle index out of range");
    }
    mesh.inv_mass[idx] = 0.0;
  }
}

}  // namespace clothopt
