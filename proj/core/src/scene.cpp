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

#include "clothopt/scene.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace clothopt {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// Strict-schema reader: every accessor names its location in error
// messages, and finish() rejects fields nobody consumed.
class ObjectReader {
 public:
  ObjectReader(const json& node, std::string location)
      : node_(node), location_(std::move(location)) {
    if (!node_.is_object()) {
      throw ConfigError(location_ + ": expected an object");
    }
  }

  bool has(const std::string& key) {
    return node_.contains(key) && !node_.at(key).is_null();
  }

  const json& require(const std::string& key) {
    if (!node_.contains(key)) {
      throw ConfigError(location_ + ": missing field '" + key + "'");
    }
    consumed_.insert(key);
    return node_.at(key);
  }

  // Marks an optional key consumed and returns it, or nullptr if absent.
  const json* take(const std::string& key) {
    if (!node_.contains(key)) return nullptr;
    consumed_.insert(key);
    return &node_.at(key);
  }

  std::string member(const std::string& key) const {
    return location_ + "." + key;
  }

  void finish() const {
    for (const auto& item : node_.items()) {
      if (!consumed_.count(item.key())) {
        throw ConfigError(location_ + ": unknown field '" + item.key() + "'");
      }
    }
  }

 private:
  const json& node_;
  std::string location_;
  std::set<std::string> consumed_;
};

double read_number(const json& node, const std::string& location) {
  if (!node.is_number()) {
    throw ConfigError(location + ": expected a number");
  }
  const double value = node.get<double>();
  if (!std::isfinite(value)) {
    throw ConfigError(location + ": must be finite");
  }
  return value;
}

int read_int(const json& node, const std::string& location) {
  if (!node.is_number_integer()) {
    throw ConfigError(location + ": expected an integer");
  }
  return node.get<int>();
}

Vec3 read_vec3(const json& node, const std::string& location) {
  if (!node.is_array() || node.size() != 3) {
    throw ConfigError(location + ": expected an array of 3 numbers");
  }
  Vec3 v;
  for (int d = 0; d < 3; ++d) {
    v[d] = read_number(node[d], location + "[" + std::to_string(d) + "]");
  }
  return v;
}

std::string read_string(const json& node, const std::string& location) {
  if (!node.is_string()) {
    throw ConfigError(location + ": expected a string");
  }
  return node.get<std::string>();
}

MeshSpec read_mesh(const json& node, const std::string& location) {
  ObjectReader reader(node, location);
  MeshSpec spec;
  spec.rows = read_int(reader.require("rows"), reader.member("rows"));
  spec.cols = read_int(reader.require("cols"), reader.member("cols"));
  spec.spacing =
      read_number(reader.require("spacing"), reader.member("spacing"));
  if (const json* origin = reader.take("origin")) {
    spec.origin = read_vec3(*origin, reader.member("origin"));
  }
  const json& orientation = reader.require("orientation");
  if (!orientation.is_array() || orientation.size() != 2) {
    throw ConfigError(reader.member("orientation") +
                      ": expected an array of 2 axis tokens");
  }
  spec.col_axis =
      read_string(orientation[0], reader.member("orientation") + "[0]");
  spec.row_axis =
      read_string(orientation[1], reader.member("orientation") + "[1]");
  reader.finish();
  return spec;
}

SimParams read_sim(const json& node, const std::string& location) {
  ObjectReader reader(node, location);
  SimParams params;
  if (const json* gravity = reader.take("gravity")) {
    params.gravity = read_vec3(*gravity, reader.member("gravity"));
  }
  if (const json* dt = reader.take("dt")) {
    params.dt = read_number(*dt, reader.member("dt"));
  }
  if (const json* iterations = reader.take("iterations")) {
    params.iterations = read_int(*iterations, reader.member("iterations"));
  }
  if (const json* k = reader.take("k_dist")) {
    params.k_distance = read_number(*k, reader.member("k_dist"));
  }
  if (const json* k = reader.take("k_bend")) {
    params.k_bending = read_number(*k, reader.member("k_bend"));
  }
  reader.finish();
  return params;
}

TargetSpec read_target(const json& node, const std::string& location) {
  ObjectReader reader(node, location);
  TargetSpec spec;
  const json& indices = reader.require("indices");
  if (!indices.is_array()) {
    throw ConfigError(reader.member("indices") + ": expected an array");
  }
  for (size_t i = 0; i < indices.size(); ++i) {
    spec.particle_indices.push_back(read_int(
        indices[i], reader.member("indices") + "[" + std::to_string(i) + "]"));
  }
  const json& positions = reader.require("positions");
  if (!positions.is_array()) {
    throw ConfigError(reader.member("positions") + ": expected an array");
  }
  for (size_t i = 0; i < positions.size(); ++i) {
    spec.target_positions.push_back(
        read_vec3(positions[i],
                  reader.member("positions") + "[" + std::to_string(i) + "]"));
  }
  reader.finish();
  return spec;
}

SphereObstacle read_obstacle(const json& node, const std::string& location) {
  ObjectReader reader(node, location);
  SphereObstacle obstacle;
  const json& spheres = reader.require("spheres");
  if (!spheres.is_array() || spheres.empty()) {
    throw ConfigError(reader.member("spheres") +
                      ": expected a nonempty array");
  }
  for (size_t i = 0; i < spheres.size(); ++i) {
    const std::string element =
        reader.member("spheres") + "[" + std::to_string(i) + "]";
    ObjectReader sphere_reader(spheres[i], element);
    Sphere sphere;
    sphere.center =
        read_vec3(sphere_reader.require("center"), element + ".center");
    sphere.radius =
        read_number(sphere_reader.require("radius"), element + ".radius");
    sphere_reader.finish();
    obstacle.spheres.push_back(sphere);
  }
  reader.finish();
  return obstacle;
}

InitStrategy read_init(const json& node, const std::string& location) {
  ObjectReader reader(node, location);
  const std::string strategy =
      read_string(reader.require("strategy"), reader.member("strategy"));
  reader.finish();
  if (strategy == "zeros") return InitStrategy::kZeros;
  if (strategy == "straight-line") return InitStrategy::kStraightLine;
  throw ConfigError(location +
                    ".strategy: expected \"zeros\" or \"straight-line\"");
}

const char* init_token(InitStrategy strategy) {
  return strategy == InitStrategy::kZeros ? "zeros" : "straight-line";
}

ordered_json vec3_json(const Vec3& v) {
  return ordered_json::array({v.x(), v.y(), v.z()});
}

bool vec3_equal(const Vec3& a, const Vec3& b) {
  return a.x() == b.x() && a.y() == b.y() && a.z() == b.z();
}

}  // namespace

Vec3 axis_from_token(const std::string& token) {
  if (token.size() == 2 && (token[0] == '+' || token[0] == '-')) {
    const double sign = token[0] == '+' ? 1.0 : -1.0;
    switch (token[1]) {
      case 'x':
        return sign * Vec3::UnitX();
      case 'y':
        return sign * Vec3::UnitY();
      case 'z':
        return sign * Vec3::UnitZ();
      default:
        break;
    }
  }
  throw ConfigError("invalid axis token '" + token +
                    "' (expected one of +x -x +y -y +z -z)");
}

void validate_scene(const Scene& scene) {
  if (scene.mesh.rows < 2 || scene.mesh.cols < 2) {
    throw ConfigError("scene: mesh.rows and mesh.cols must be at least 2");
  }
  if (!(scene.mesh.spacing > 0.0)) {
    throw ConfigError("scene: mesh.spacing must be positive");
  }
  const Vec3 col_axis = axis_from_token(scene.mesh.col_axis);
  const Vec3 row_axis = axis_from_token(scene.mesh.row_axis);
  if (col_axis.cross(row_axis).norm() < 1e-12) {
    throw ConfigError("scene: mesh.orientation axes must differ");
  }
  const int particle_count = scene.mesh.rows * scene.mesh.cols;

  if (scene.control_points.empty()) {
    throw ConfigError("scene: control_points must be nonempty");
  }
  std::set<int> seen;
  for (int index : scene.control_points) {
    if (index < 0 || index >= particle_count) {
      throw ConfigError("scene: control point index " + std::to_string(index) +
                        " out of range");
    }
    if (!seen.insert(index).second) {
      throw ConfigError("scene: duplicate control point index " +
                        std::to_string(index));
    }
  }

  if (scene.horizon < 1) {
    throw ConfigError("scene: horizon must be at least 1");
  }
  if (!(scene.sim.dt > 0.0)) {
    throw ConfigError("scene: sim.dt must be positive");
  }
  if (scene.sim.iterations < 1) {
    throw ConfigError("scene: sim.iterations must be at least 1");
  }
  if (!(scene.sim.k_distance >= 0.0) || !(scene.sim.k_bending >= 0.0)) {
    throw ConfigError("scene: stiffnesses must be nonnegative");
  }

  validate_target_spec(scene.target, particle_count);

  if (scene.obstacle.has_value() != scene.delta.has_value()) {
    throw ConfigError(
        "scene: obstacle and delta must be provided together or both null");
  }
  if (scene.obstacle) {
    if (scene.obstacle->empty()) {
      throw ConfigError("scene: obstacle.spheres must be nonempty");
    }
    for (size_t i = 0; i < scene.obstacle->spheres.size(); ++i) {
      if (!(scene.obstacle->spheres[i].radius > 0.0)) {
        throw ConfigError("scene: obstacle sphere " + std::to_string(i) +
                          " radius must be positive");
      }
    }
    if (!(*scene.delta > 0.0)) {
      throw ConfigError("scene: delta must be positive");
    }
  }

  if (!(scene.weights.alpha >= 0.0) || !std::isfinite(scene.weights.alpha) ||
      !(scene.weights.beta >= 0.0) || !std::isfinite(scene.weights.beta)) {
    throw ConfigError("scene: weights must be finite and nonnegative");
  }
}

Scene parse_scene(const std::string& text, const std::string& source_name) {
  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source_name + ": parse error: " + e.what());
  }

  ObjectReader reader(document, source_name);
  Scene scene;
  scene.mesh = read_mesh(reader.require("mesh"), reader.member("mesh"));

  const json& control_points = reader.require("control_points");
  if (!control_points.is_array()) {
    throw ConfigError(reader.member("control_points") + ": expected an array");
  }
  for (size_t i = 0; i < control_points.size(); ++i) {
    scene.control_points.push_back(
        read_int(control_points[i], reader.member("control_points") + "[" +
                                        std::to_string(i) + "]"));
  }

  scene.horizon =
      read_int(reader.require("horizon"), reader.member("horizon"));

  if (const json* sim = reader.take("sim")) {
    scene.sim = read_sim(*sim, reader.member("sim"));
  }
  scene.target = read_target(reader.require("target"), reader.member("target"));

  if (const json* obstacle = reader.take("obstacle")) {
    if (!obstacle->is_null()) {
      scene.obstacle = read_obstacle(*obstacle, reader.member("obstacle"));
    }
  }
  if (const json* delta = reader.take("delta")) {
    if (!delta->is_null()) {
      scene.delta = read_number(*delta, reader.member("delta"));
    }
  }
  if (const json* weights = reader.take("weights")) {
    ObjectReader weights_reader(*weights, reader.member("weights"));
    scene.weights.alpha = read_number(weights_reader.require("alpha"),
                                      weights_reader.member("alpha"));
    scene.weights.beta = read_number(weights_reader.require("beta"),
                                     weights_reader.member("beta"));
    weights_reader.finish();
  }
  if (const json* init = reader.take("init")) {
    scene.init = read_init(*init, reader.member("init"));
  }
  reader.finish();

  validate_scene(scene);
  return scene;
}

Scene load_scene(const std::filesystem::path& path) {
  std::ifstream stream(path);
  if (!stream) {
    throw ConfigError("cannot open scene file: " + path.string());
  }
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return parse_scene(buffer.str(), path.filename().string());
}

std::string serialize_scene(const Scene& scene) {
  ordered_json document;
  document["mesh"] = {
      {"rows", scene.mesh.rows},
      {"cols", scene.mesh.cols},
      {"spacing", scene.mesh.spacing},
      {"origin", vec3_json(scene.mesh.origin)},
      {"orientation",
       ordered_json::array({scene.mesh.col_axis, scene.mesh.row_axis})},
  };
  document["control_points"] = scene.control_points;
  document["horizon"] = scene.horizon;
  document["sim"] = {
      {"gravity", vec3_json(scene.sim.gravity)},
      {"dt", scene.sim.dt},
      {"iterations", scene.sim.iterations},
      {"k_dist", scene.sim.k_distance},
      {"k_bend", scene.sim.k_bending},
  };
  ordered_json positions = ordered_json::array();
  for (const Vec3& p : scene.target.target_positions) {
    positions.push_back(vec3_json(p));
  }
  document["target"] = {
      {"indices", scene.target.particle_indices},
      {"positions", positions},
  };
  if (scene.obstacle) {
    ordered_json spheres = ordered_json::array();
    for (const Sphere& sphere : scene.obstacle->spheres) {
      spheres.push_back({{"center", vec3_json(sphere.center)},
                         {"radius", sphere.radius}});
    }
    document["obstacle"] = {{"spheres", spheres}};
    document["delta"] = *scene.delta;
  } else {
    document["obstacle"] = nullptr;
    document["delta"] = nullptr;
  }
  document["weights"] = {
      {"alpha", scene.weights.alpha},
      {"beta", scene.weights.beta},
  };
  document["init"] = {{"strategy", init_token(scene.init)}};
  return document.dump(2) + "\n";
}

bool scene_equal(const Scene& a, const Scene& b) {
  if (a.mesh.rows != b.mesh.rows || a.mesh.cols != b.mesh.cols ||
      a.mesh.spacing != b.mesh.spacing ||
      !vec3_equal(a.mesh.origin, b.mesh.origin) ||
      a.mesh.col_axis != b.mesh.col_axis || a.mesh.row_axis != b.mesh.row_axis) {
    return false;
  }
  if (a.control_points != b.control_points || a.horizon != b.horizon) {
    return false;
  }
  if (!vec3_equal(a.sim.gravity, b.sim.gravity) || a.sim.dt != b.sim.dt ||
      a.sim.iterations != b.sim.iterations ||
      a.sim.k_distance != b.sim.k_distance ||
      a.sim.k_bending != b.sim.k_bending) {
    return false;
  }
  if (a.target.particle_indices != b.target.particle_indices ||
      a.target.target_positions.size() != b.target.target_positions.size()) {
    return false;
  }
  for (size_t i = 0; i < a.target.target_positions.size(); ++i) {
    if (!vec3_equal(a.target.target_positions[i], b.target.target_positions[i]))
      return false;
  }
  if (a.obstacle.has_value() != b.obstacle.has_value()) return false;
  if (a.obstacle) {
    if (a.obstacle->spheres.size() != b.obstacle->spheres.size()) return false;
    for (size_t i = 0; i < a.obstacle->spheres.size(); ++i) {
      if (!vec3_equal(a.obstacle->spheres[i].center,
                      b.obstacle->spheres[i].center) ||
          a.obstacle->spheres[i].radius != b.obstacle->spheres[i].radius) {
        return false;
      }
    }
  }
  if (a.delta.has_value() != b.delta.has_value()) return false;
  if (a.delta && *a.delta != *b.delta) return false;
  return a.weights.alpha == b.weights.alpha &&
         a.weights.beta == b.weights.beta && a.init == b.init;
}

namespace {

Scene base_hanging_scene() {
  Scene scene;
  scene.mesh.rows = 10;
  scene.mesh.cols = 10;
  scene.mesh.spacing = 1.0;
  scene.mesh.origin = Vec3::Zero();
  scene.mesh.col_axis = "+x";
  scene.mesh.row_axis = "-z";
  scene.control_points = {0, 9};
  scene.horizon = 10;
  // Pseudo-time step sized to the unit mesh spacing so a hanging sheet
  // re-drapes within a few quasi-static steps; with the schema default
  // the per-step gravity bias is too small relative to this mesh scale
  // for the free end to respond inside a ten-step horizon.
  scene.sim.dt = 0.3;
  scene.init = InitStrategy::kStraightLine;
  return scene;
}

// Bottom-row line target at depth `y`, at the hanging bottom edge's own
// height, so the optimum is a translated hang.
TargetSpec bottom_line_target(double y) {
  TargetSpec target;
  for (int j = 0; j < 10; ++j) {
    target.particle_indices.push_back(90 + j);
    target.target_positions.push_back(Vec3(1.0 * j, y, -9.0));
  }
  return target;
}

}  // namespace

Scene preset(const std::string& name, std::optional<double> delta) {
  if (name == "ushape") {
    if (!delta) {
      throw ConfigError("preset 'ushape' requires a clearance value");
    }
    Scene scene = base_hanging_scene();
    scene.target = bottom_line_target(2.9);
    // The U's arms straddle the cloth (columns keep 0.54 clearance from
    // them), and its base runs under the cloth's path midway between the
    // start pose and the target line, slightly below the hanging bottom
    // edge.  Crossing therefore means lifting the bottom edge over the
    // base bar by an amount that grows with the clearance value, while
    // both the start pose and the target line sit about 0.35 from the
    // bar: inside the widest clearance band under study but outside the
    // narrowest, which separates the optimal paths by clearance value.
    scene.obstacle =
        translate(build_u_shape(2.4, 8.0, 12.6, 18), Vec3(4.5, 1.45, -9.66));
    scene.delta = *delta;
    scene.weights.alpha = 1.0;
    scene.weights.beta = 1e-4;
    validate_scene(scene);
    return scene;
  }
  if (delta) {
    throw ConfigError("preset '" + name +
                      "' has no obstacle and takes no clearance value");
  }
  if (name == "swing") {
    Scene scene = base_hanging_scene();
    scene.target = bottom_line_target(6.0);
    scene.weights.alpha = 1.0;
    scene.weights.beta = 1e-5;
    validate_scene(scene);
    return scene;
  }
  if (name == "drop") {
    Scene scene = base_hanging_scene();
    scene.mesh.row_axis = "+y";  // flat horizontal sheet
    scene.target.particle_indices = {0, 9, 90, 99};
    scene.target.target_positions = {Vec3(0.0, 0.0, -6.0),
                                     Vec3(9.0, 0.0, -6.0),
                                     Vec3(0.0, 9.0, -6.0),
                                     Vec3(9.0, 9.0, -6.0)};
    scene.weights.alpha = 0.1;
    scene.weights.beta = 1e-5;
    validate_scene(scene);
    return scene;
  }
  throw ConfigError("unknown preset '" + name +
                    "' (expected ushape, swing, or drop)");
}

}  // namespace clothopt
