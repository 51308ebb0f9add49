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

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "clothopt/scene.h"
#include "clothopt/types.h"
#include "export.h"

#ifndef CLOTHOPT_CLI_PATH
#error "CLOTHOPT_CLI_PATH must point at the clothopt executable"
#endif

namespace {

namespace fs = std::filesystem;
using clothopt::Scene;
using clothopt::Vec3;

// Creates a fresh working directory for one test case and removes it on
// destruction.
struct TempDir {
  fs::path path;

  explicit TempDir(const std::string& label) {
    path = fs::temp_directory_path() /
           ("clothopt_cli_" + label + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// Runs the CLI with the given arguments; returns its exit code.
int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + CLOTHOPT_CLI_PATH + "\" " +
                          args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

int run_cli(const std::string& args, const TempDir& dir) {
  return run_cli(args, dir.path / "log.txt");
}

// A fast hanging sheet with a reachable sideways line target.
Scene reduced_swing_scene() {
  Scene scene;
  scene.mesh.rows = 3;
  scene.mesh.cols = 3;
  scene.mesh.spacing = 1.0;
  scene.mesh.origin = Vec3::Zero();
  scene.mesh.col_axis = "+x";
  scene.mesh.row_axis = "-z";
  scene.control_points = {0, 2};
  scene.horizon = 3;
  scene.sim.dt = 0.3;
  scene.sim.iterations = 20;
  scene.target.particle_indices = {6, 7, 8};
  scene.target.target_positions = {Vec3(0.0, 1.2, -2.0), Vec3(1.0, 1.2, -2.0),
                                   Vec3(2.0, 1.2, -2.0)};
  scene.weights.alpha = 1.0;
  scene.weights.beta = 1e-4;
  return scene;
}

// The same sheet with a small sphere near the bottom edge's path.
Scene reduced_constrained_scene() {
  Scene scene = reduced_swing_scene();
  clothopt::SphereObstacle obstacle;
  obstacle.spheres = {{Vec3(1.0, 0.6, -2.2), 0.3}};
  scene.obstacle = obstacle;
  scene.delta = 0.1;
  return scene;
}

// Target buried inside an obstacle: the pull into the sphere and the
// penalty push balance at a residual violation, so a single penalty round
// ends infeasible.
Scene trapped_scene() {
  Scene scene = reduced_swing_scene();
  clothopt::SphereObstacle obstacle;
  obstacle.spheres = {{Vec3(1.0, 2.5, -2.0), 1.0}};
  scene.obstacle = obstacle;
  scene.delta = 0.3;
  for (Vec3& target : scene.target.target_positions) {
    target = Vec3(1.0, 2.5, -2.0);  // the sphere center
  }
  return scene;
}

fs::path write_scene(const TempDir& dir, const Scene& scene,
                     const std::string& name) {
  const fs::path path = dir.path / name;
  std::ofstream stream(path);
  stream << clothopt::serialize_scene(scene);
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream stream(path);
  REQUIRE(stream.good());
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return buffer.str();
}

int count_lines(const std::string& text) {
  int lines = 0;
  for (char c : text) {
    if (c == '\n') ++lines;
  }
  return lines;
}

int count_occurrences(const std::string& text, const std::string& needle) {
  int n = 0;
  for (size_t at = text.find(needle); at != std::string::npos;
       at = text.find(needle, at + needle.size())) {
    ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("optimize: artifacts have the documented shapes") {
  TempDir dir("optimize");
  const fs::path scene_file = write_scene(dir, reduced_swing_scene(),
                                          "scene.json");
  const fs::path out = dir.path / "run";
  const int exit_code = run_cli(
      "optimize --scene \"" + scene_file.string() + "\" --out \"" +
          out.string() + "\"",
      dir);
  CHECK(exit_code == 0);

  const int horizon = 3;
  const int particles = 9;

  // controls.csv: header + one row per (step, control point).
  const std::string controls = slurp(out / "controls.csv");
  CHECK(controls.rfind("t,point,dx,dy,dz\n", 0) == 0);
  CHECK(count_lines(controls) == 1 + horizon * 2);

  // states.csv: header + one row per (state, particle), initial included.
  const std::string states = slurp(out / "states.csv");
  CHECK(states.rfind("t,particle,x,y,z\n", 0) == 0);
  CHECK(count_lines(states) == 1 + (horizon + 1) * particles);

  // frames: one OBJ per state with full vertex and triangle counts.
  for (int t = 0; t <= horizon; ++t) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%03d.obj", t);
    const fs::path frame = out / "frames" / name;
    REQUIRE(fs::exists(frame));
    const std::string obj = slurp(frame);
    CHECK(count_occurrences(obj, "\nv ") + (obj.rfind("v ", 0) == 0 ? 1 : 0) ==
          particles);
    CHECK(count_occurrences(obj, "\nf ") == 8);  // 2 triangles per cell
  }
  CHECK_FALSE(fs::exists(out / "frames" /
                         ("frame_00" + std::to_string(horizon + 1) + ".obj")));

  // metrics.json carries the report keys and round-trips through the reader.
  const nlohmann::json metrics = nlohmann::json::parse(slurp(out /
                                                             "metrics.json"));
  for (const char* key : {"G", "T", "E", "C", "min_sdf", "loss", "status",
                          "seed", "delta", "rounds"}) {
    CHECK(metrics.contains(key));
  }
  CHECK(metrics["status"] == "feasible");
  CHECK(metrics["C"] == 0.0);
  CHECK(metrics["min_sdf"].is_null());  // unconstrained
  CHECK(metrics["delta"].is_null());
  const clothopt::Metrics read =
      clothopt::read_metrics_json(out / "metrics.json");
  CHECK(read.target_error == metrics["G"].get<double>());
  CHECK(read.loss == metrics["loss"].get<double>());

  // plots: two views plus the convergence curve; the path polylines carry
  // horizon + 1 vertices per control point.
  for (const char* name : {"paths_top.svg", "paths_side.svg",
                           "convergence.svg"}) {
    CHECK(fs::exists(out / "plots" / name));
  }
  const std::string top = slurp(out / "plots" / "paths_top.svg");
  CHECK(count_occurrences(top, "<polyline") == 2);
  const size_t first = top.find("<polyline points=\"");
  REQUIRE(first != std::string::npos);
  const size_t open = top.find('"', first) + 1;
  const size_t close = top.find('"', open);
  const std::string points = top.substr(open, close - open);
  // Vertices are space-separated "x,y" pairs.
  CHECK(count_occurrences(points, ",") == horizon + 1);
}

TEST_CASE("optimize: exit 1 on a missing scene file") {
  TempDir dir("missing");
  const int exit_code = run_cli(
      "optimize --scene \"" + (dir.path / "absent.json").string() +
          "\" --out \"" + (dir.path / "run").string() + "\"",
      dir);
  CHECK(exit_code == 1);
}

TEST_CASE("optimize: exit 1 on a clearance override without an obstacle") {
  TempDir dir("override");
  const fs::path scene_file = write_scene(dir, reduced_swing_scene(),
                                          "scene.json");
  const int exit_code = run_cli(
      "optimize --scene \"" + scene_file.string() + "\" --out \"" +
          (dir.path / "run").string() + "\" --delta 0.2",
      dir);
  CHECK(exit_code == 1);
}

TEST_CASE("optimize: exit 2 when the trajectory stays infeasible") {
  TempDir dir("trapped");
  const fs::path scene_file = write_scene(dir, trapped_scene(), "scene.json");
  const fs::path out = dir.path / "run";
  const int exit_code = run_cli(
      "optimize --scene \"" + scene_file.string() + "\" --out \"" +
          out.string() + "\" --max-rounds 1",
      dir);
  CHECK(exit_code == 2);
  const nlohmann::json metrics = nlohmann::json::parse(slurp(out /
                                                             "metrics.json"));
  CHECK(metrics["status"] == "infeasible");
  CHECK(metrics["C"].get<double>() < -1e-5);
}

TEST_CASE("optimize: alpha/beta overrides reach the objective") {
  TempDir dir("weights");
  const fs::path scene_file = write_scene(dir, reduced_swing_scene(),
                                          "scene.json");
  const fs::path out = dir.path / "run";
  const int exit_code = run_cli(
      "optimize --scene \"" + scene_file.string() + "\" --out \"" +
          out.string() + "\" --alpha 0 --beta 0",
      dir);
  CHECK(exit_code == 0);
  const nlohmann::json metrics = nlohmann::json::parse(slurp(out /
                                                             "metrics.json"));
  // With both weights zeroed the loss equals the target error term alone.
  CHECK(metrics["loss"].get<double>() ==
        doctest::Approx(metrics["G"].get<double>()).epsilon(1e-15));
}

TEST_CASE("sweep: run directories, table layout, and determinism") {
  TempDir dir("sweep");
  const fs::path scene_file = write_scene(dir, reduced_constrained_scene(),
                                          "scene.json");
  const fs::path out_a = dir.path / "a";
  const fs::path out_b = dir.path / "b";
  const std::string args_tail = " --delta-list 0.1,0.15 --seed 7";
  const int exit_a = run_cli("sweep --scene \"" + scene_file.string() +
                                 "\" --out \"" + out_a.string() + "\"" +
                                 args_tail,
                             dir.path / "log_a.txt");
  const int exit_b = run_cli("sweep --scene \"" + scene_file.string() +
                                 "\" --out \"" + out_b.string() + "\"" +
                                 args_tail,
                             dir.path / "log_b.txt");
  CHECK(exit_a == exit_b);

  // One run directory per clearance value, named by hundredths.
  for (const char* sub : {"d010", "d015"}) {
    CHECK(fs::exists(out_a / sub / "metrics.json"));
    CHECK(fs::exists(out_a / sub / "controls.csv"));
  }

  // table.csv: header plus the five metric rows, one column per clearance.
  const std::string table = slurp(out_a / "table.csv");
  CHECK(count_lines(table) == 6);
  std::istringstream rows(table);
  std::string line;
  std::getline(rows, line);
  CHECK(line == "metric,delta=0.1,delta=0.15");
  const char* expected_rows[] = {"G,", "T,", "E,", "C,", "min_sdf,"};
  for (const char* prefix : expected_rows) {
    REQUIRE(std::getline(rows, line).good());
    CHECK(line.rfind(prefix, 0) == 0);
  }

  // Identical invocations are byte-identical, metrics files included.
  CHECK(slurp(out_a / "table.csv") == slurp(out_b / "table.csv"));
  for (const char* sub : {"d010", "d015"}) {
    CHECK(slurp(out_a / sub / "metrics.json") ==
          slurp(out_b / sub / "metrics.json"));
  }
}

TEST_CASE("sweep: duplicate clearance values are rejected") {
  TempDir dir("sweepdup");
  const fs::path scene_file = write_scene(dir, reduced_constrained_scene(),
                                          "scene.json");
  const int exit_code = run_cli(
      "sweep --scene \"" + scene_file.string() + "\" --out \"" +
          (dir.path / "out").string() + "\" --delta-list 0.1,0.1",
      dir);
  CHECK(exit_code == 1);
}

TEST_CASE("sweep: rejected on an obstacle-free scene") {
  TempDir dir("sweepfree");
  const fs::path scene_file = write_scene(dir, reduced_swing_scene(),
                                          "scene.json");
  const int exit_code = run_cli(
      "sweep --scene \"" + scene_file.string() + "\" --out \"" +
          (dir.path / "out").string() + "\" --delta-list 0.1",
      dir);
  CHECK(exit_code == 1);
}

TEST_CASE("ablate: four variants with per-variant artifacts and the chart") {
  TempDir dir("ablate");
  const fs::path scene_file = write_scene(dir, reduced_swing_scene(),
                                          "scene.json");
  const fs::path out = dir.path / "out";
  const int exit_code = run_cli(
      "ablate --scene \"" + scene_file.string() + "\" --out \"" +
          out.string() + "\"",
      dir);
  CHECK(exit_code == 0);
  for (const char* variant : {"g_only", "g_t", "g_e", "g_t_e"}) {
    CHECK(fs::exists(out / variant / "metrics.json"));
    CHECK(fs::exists(out / variant / "plots" / "paths_side.svg"));
  }
  REQUIRE(fs::exists(out / "ablation.svg"));
  const std::string chart = slurp(out / "ablation.svg");
  // Grouped bars: three metric bars per variant.
  CHECK(count_occurrences(chart, "<rect") >= 12);
}

TEST_CASE("ablate: rejected when the scene has an obstacle") {
  TempDir dir("ablateobs");
  const fs::path scene_file = write_scene(dir, reduced_constrained_scene(),
                                          "scene.json");
  const int exit_code = run_cli(
      "ablate --scene \"" + scene_file.string() + "\" --out \"" +
          (dir.path / "out").string() + "\"",
      dir);
  CHECK(exit_code == 1);
}
