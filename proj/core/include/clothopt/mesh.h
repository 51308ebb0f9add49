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

#include <array>
#include <span>
#include <vector>

#include "clothopt/types.h"

namespace clothopt {

// One pairwise constraint: keep particles i and j at their build-time
// separation rest_length.
struct ConstraintPair {
  int i = 0;
  int j = 0;
  double rest_length = 0.0;
};

// Partition of constraint indices into particle-disjoint sets. Constraints in
// one set can be projected simultaneously.
using ColorSets = std::vector<std::vector<int>>;

// Triangulated grid cloth. Immutable after construction.
struct ClothMesh {
  int n_rows = 0;
  int n_cols = 0;
  double spacing = 0.0;

  std::vector<Vec3> rest_positions;
  std::vector<std::array<int, 3>> triangles;

  // Unique triangle edges.
  std::vector<ConstraintPair> distance_pairs;
  // Opposite-vertex pairs of triangles sharing an edge.
  std::vector<ConstraintPair> bending_pairs;

  ColorSets distance_colors;
  ColorSets bending_colors;

  // 0 for pinned/control particles, 1 otherwise.
  std::vector<double> inv_mass;

  int particle_count() const { return static_cast<int>(rest_positions.size()); }
  int index_of(int row, int col) const { return row * n_cols + col; }
};

// Builds a rows x cols grid in the plane spanned by col_axis/row_axis.
// Particle (r, c) sits at origin + c*spacing*col_axis + r*spacing*row_axis;
// every cell is split by the (r,c) -> (r+1,c+1) diagonal.
ClothMesh build_grid(int n_rows, int n_cols, double spacing, const Vec3& origin,
                     const Vec3& col_axis, const Vec3& row_axis);

// Greedy sequential coloring: each constraint goes to the lowest-numbered set
// that shares no particle with it.
ColorSets color_constraints(std::span<const ConstraintPair> pairs);

// Zeroes inv_mass for the given particles so projection and gravity never
// move them.
void pin_particles(ClothMesh& mesh, std::span<const int> indices);

}  // namespace clothopt
