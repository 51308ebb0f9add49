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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>
#include <vector>

#include "clothopt/mesh.h"
#include "clothopt/types.h"

namespace {

using clothopt::ClothMesh;
using clothopt::ConstraintPair;
using clothopt::Vec3;

// Sorted (i, j, d0-rounded) view of a pair list for order-insensitive
// comparison.
std::set<std::pair<int, int>> pair_set(const std::vector<ConstraintPair>& pairs) {
  std::set<std::pair<int, int>> out;
  for (const ConstraintPair& p : pairs) {
    out.insert({std::min(p.i, p.j), std::max(p.i, p.j)});
  }
  return out;
}

}  // namespace

TEST_CASE("2x2 grid: counts and topology from hand enumeration") {
  const ClothMesh mesh =
      clothopt::build_grid(2, 2, 1.0, Vec3::Zero(), Vec3::UnitX(), -Vec3::UnitZ());

  CHECK(mesh.particle_count() == 4);
  REQUIRE(mesh.triangles.size() == 2);
  // Cells split along the (r,c)->(r+1,c+1) diagonal.
  CHECK(mesh.triangles[0] == std::array<int, 3>{0, 2, 3});
  CHECK(mesh.triangles[1] == std::array<int, 3>{0, 3, 1});

  // 4 boundary edges + 1 diagonal.
  REQUIRE(mesh.distance_pairs.size() == 5);
  const std::set<std::pair<int, int>> expected = {
      {0, 1}, {0, 2}, {0, 3}, {1, 3}, {2, 3}};
  CHECK(pair_set(mesh.distance_pairs) == expected);

  // One bending pair: the two off-diagonal corners, rest length sqrt(2).
  REQUIRE(mesh.bending_pairs.size() == 1);
  const ConstraintPair& bend = mesh.bending_pairs[0];
  CHECK(std::min(bend.i, bend.j) == 1);
  CHECK(std::max(bend.i, bend.j) == 2);
  CHECK(bend.rest_length == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("2x2 grid: every rest length is 1 or sqrt(2)") {
  const ClothMesh mesh =
      clothopt::build_grid(2, 2, 1.0, Vec3::Zero(), Vec3::UnitX(), -Vec3::UnitZ());
  for (const ConstraintPair& p : mesh.distance_pairs) {
    const bool unit = std::abs(p.rest_length - 1.0) < 1e-12;
    const bool diag = std::abs(p.rest_length - std::sqrt(2.0)) < 1e-12;
    CHECK((unit || diag));
    // The diagonal pair is (0, 3).
    if (diag) {
      CHECK(std::min(p.i, p.j) == 0);
      CHECK(std::max(p.i, p.j) == 3);
    }
  }
}

TEST_CASE("2x2 grid: greedy coloring yields three distance sets") {
  const ClothMesh mesh =
      clothopt::build_grid(2, 2, 1.0, Vec3::Zero(), Vec3::UnitX(), -Vec3::UnitZ());
  // Particle 0 touches constraints (0,2), (0,3), (0,1): three incident
  // constraints force at least three sets, and greedy produces exactly three.
  REQUIRE(mesh.distance_colors.size() == 3);
  CHECK(mesh.distance_colors[0] == std::vector<int>{0, 3});
  CHECK(mesh.distance_colors[1] == std::vector<int>{1, 4});
  CHECK(mesh.distance_colors[2] == std::vector<int>{2});
}

TEST_CASE("10x10 grid: paper-scale counts") {
  const ClothMesh mesh =
      clothopt::build_grid(10, 10, 1.0, Vec3::Zero(), Vec3::UnitX(), -Vec3::UnitZ());
  CHECK(mesh.particle_count() == 100);
  CHECK(mesh.triangles.size() == 162);
  // 2*9*10 axis edges + 81 diagonals.
  CHECK(mesh.distance_pairs.size() == 261);
  // One bending pair per interior shared edge.
  CHECK(mesh.bending_pairs.size() == 225);
}

TEST_CASE("grid axes: orientation tokens place particles as documented") {
  const ClothMesh mesh =
      clothopt::build_grid(2, 3, 0.5, Vec3(1.0, 2.0, 3.0), Vec3::UnitX(), -Vec3::UnitZ());
  // index_of(row, col) = row * n_cols + col; columns march along +x,
  // rows along -z, scaled by spacing, from the origin.
  CHECK(mesh.rest_positions[mesh.index_of(0, 0)].isApprox(Vec3(1.0, 2.0, 3.0)));
  CHECK(
      mesh.rest_positions[mesh.index_of(0, 2)].isApprox(Vec3(2.0, 2.0, 3.0)));
  CHECK(
      mesh.rest_positions[mesh.index_of(1, 0)].isApprox(Vec3(1.0, 2.0, 2.5)));

  const ClothMesh flat =
      clothopt::build_grid(2, 2, 1.0, Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY());
  CHECK(flat.rest_positions[flat.index_of(1, 1)].isApprox(Vec3(1.0, 1.0, 0.0)));
}

TEST_CASE("grid validation: degenerate dimensions and spacing rejected") {
  CHECK_THROWS_AS(clothopt::build_grid(1, 2, 1.0, Vec3::Zero(), Vec3::UnitX(), -Vec3::UnitZ()),
                  clothopt::ConfigError);
  CHECK_THROWS_AS(clothopt::build_grid(2, 1, 1.0, Vec3::Zero(), Vec3::UnitX(), -Vec3::UnitZ()),
                  clothopt::ConfigError);
  CHECK_THROWS_AS(clothopt::build_grid(2, 2, 0.0, Vec3::Zero(), Vec3::UnitX(), -Vec3::UnitZ()),
                  clothopt::ConfigError);
  CHECK_THROWS_AS(clothopt::build_grid(2, 2, -1.0, Vec3::Zero(), Vec3::UnitX(), -Vec3::UnitZ()),
                  clothopt::ConfigError);
  CHECK_THROWS_AS(clothopt::build_grid(2, 2, 1.0, Vec3::Zero(), Vec3::UnitX(), Vec3::UnitX()),
                  clothopt::ConfigError);
  CHECK_THROWS_AS(clothopt::build_grid(2, 2, 1.0, Vec3::Zero(), Vec3::Zero(), -Vec3::UnitZ()),
                  clothopt::ConfigError);
}

TEST_CASE("color_constraints: single constraint gets a single set") {
  const std::vector<ConstraintPair> one = {{0, 1, 1.0}};
  const clothopt::ColorSets sets = clothopt::color_constraints(one);
  REQUIRE(sets.size() == 1);
  CHECK(sets[0] == std::vector<int>{0});
}

TEST_CASE("color_constraints: disjoint constraints share one set") {
  const std::vector<ConstraintPair> two = {{0, 1, 1.0}, {2, 3, 1.0}};
  const clothopt::ColorSets sets = clothopt::color_constraints(two);
  REQUIRE(sets.size() == 1);
  CHECK(sets[0] == std::vector<int>{0, 1});
}

TEST_CASE("coloring validity and coverage on random grids up to 12x12") {
  // Deterministic sweep over grid sizes; "random" meshes reduce to grid
  // dimensions since topology is fully determined by (rows, cols).
  for (int rows = 2; rows <= 12; ++rows) {
    for (int cols = 2; cols <= 12; cols += 3) {
      const ClothMesh mesh =
          clothopt::build_grid(rows, cols, 0.7, Vec3::Zero(), Vec3::UnitX(), -Vec3::UnitZ());
      const auto check_partition = [&](const clothopt::ColorSets& sets,
                                       const std::vector<ConstraintPair>& pairs) {
        std::vector<int> seen;
        for (const std::vector<int>& set : sets) {
          std::set<int> touched;
          for (int idx : set) {
            REQUIRE(idx >= 0);
            REQUIRE(idx < static_cast<int>(pairs.size()));
            // No two constraints in one set may share a particle.
            CHECK(touched.insert(pairs[idx].i).second);
            CHECK(touched.insert(pairs[idx].j).second);
            seen.push_back(idx);
          }
        }
        // Coverage: every constraint exactly once.
        std::sort(seen.begin(), seen.end());
        REQUIRE(seen.size() == pairs.size());
        for (size_t k = 0; k < seen.size(); ++k) {
          CHECK(seen[k] == static_cast<int>(k));
        }
      };
      check_partition(mesh.distance_colors, mesh.distance_pairs);
      check_partition(mesh.bending_colors, mesh.bending_pairs);
    }
  }
}

TEST_CASE("rest-length consistency: d0 recomputes from rest positions") {
  const ClothMesh mesh =
      clothopt::build_grid(5, 4, 1.3, Vec3(0.2, -0.1, 0.4), Vec3::UnitX(), -Vec3::UnitZ());
  for (const ConstraintPair& p : mesh.distance_pairs) {
    const double d =
        (mesh.rest_positions[p.i] - mesh.rest_positions[p.j]).norm();
    CHECK(d == doctest::Approx(p.rest_length).epsilon(1e-14));
  }
  for (const ConstraintPair& p : mesh.bending_pairs) {
    const double d =
        (mesh.rest_positions[p.i] - mesh.rest_positions[p.j]).norm();
    CHECK(d == doctest::Approx(p.rest_length).epsilon(1e-14));
  }
}

TEST_CASE("pin_particles zeroes inverse mass and validates indices") {
  ClothMesh mesh = clothopt::build_grid(3, 3, 1.0, Vec3::Zero(), Vec3::UnitX(), -Vec3::UnitZ());
  for (double w : mesh.inv_mass) {
    CHECK(w == 1.0);
  }
  const std::vector<int> pins = {0, 2};
  clothopt::pin_particles(mesh, pins);
  CHECK(mesh.inv_mass[0] == 0.0);
  CHECK(mesh.inv_mass[2] == 0.0);
  CHECK(mesh.inv_mass[1] == 1.0);

  const std::vector<int> bad = {9};
  CHECK_THROWS_AS(clothopt::pin_particles(mesh, bad), clothopt::ConfigError);
}
