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

#ifndef CLOTHOPT_SCENE_H_
#define CLOTHOPT_SCENE_H_

#include <filesystem>
#include <optional>
#include <string>

#include "clothopt/objective.h"
#include "clothopt/safety.h"
#include "clothopt/types.h"
#include "clothopt/xpbd.h"

namespace clothopt {

// How the initial control sequence is produced.
enum class InitStrategy {
  kZeros,
  kStraightLine,  // equal steps from each control point towards its goal
};

// Grid geometry in declarative form. `col_axis`/`row_axis` are axis tokens
// ("+x", "-z", ...) naming the world directions along which columns and
// rows advance from the origin.
struct MeshSpec {
  int rows = 0;
  int cols = 0;
  double spacing = 0.0;
  Vec3 origin = Vec3::Zero();
  std::string col_axis = "+x";
  std::string row_axis = "-z";
};

// A complete declarative task: cloth, grasp points, targets, optional
// obstacle with clearance, loss weights, and initialization strategy.
// Immutable after load; validated as a whole by validate_scene.
struct Scene {
  MeshSpec mesh;
  std::vector<int> control_points;
  int horizon = 0;
  SimParams sim;
  TargetSpec target;
  std::optional<SphereObstacle> obstacle;
  std::optional<double> delta;  // present exactly when obstacle is
  ObjectiveWeights weights;
  InitStrategy init = InitStrategy::kStraightLine;
};

// Maps an axis token to its unit vector; throws ConfigError on anything
// other than {+,-}{x,y,z}.
Vec3 axis_from_token(const std::string& token);

// Enforces every scene invariant (ranges, distinctness, obstacle/delta
// pairing, axis validity); throws ConfigError naming the offending field.
void validate_scene(const Scene& scene);

// Parses and validates a scene document. `source_name` prefixes error
// messages (a file path or a synthetic label for in-memory documents).
// Unknown fields anywhere in the document are rejected.
Scene parse_scene(const std::string& text, const std::string& source_name);

// Reads, parses, and validates the scene file at `path`.
Scene load_scene(const std::filesystem::path& path);

// Serializes a scene back to its document form; the result parses to an
// equal scene.
std::string serialize_scene(const Scene& scene);

// Structural equality (exact, including floating-point fields).
bool scene_equal(const Scene& a, const Scene& b);

// Built-in tasks. "ushape" requires a clearance value; "swing" and "drop"
// are obstacle-free and reject one. Unknown names throw ConfigError.
Scene preset(const std::string& name, std::optional<double> delta = {});

}  // namespace clothopt

#endif  // CLOTHOPT_SCENE_H_
