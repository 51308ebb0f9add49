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

#ifndef CLOTHOPT_TOOLS_COMMANDS_H_
#define CLOTHOPT_TOOLS_COMMANDS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "clothopt/optimize.h"
#include "clothopt/scene.h"

namespace clothopt {

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;

// Command-line overrides applied on top of a loaded scene.
struct RunOverrides {
  std::optional<double> delta;  // requires a scene with an obstacle
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<int> max_rounds;
  int seed = 0;  // recorded in metrics.json; the pipeline itself is
                 // deterministic and consumes no randomness
};

Scene apply_overrides(Scene scene, const RunOverrides& overrides);

// Optimizes one scene and writes the full artifact set (controls.csv,
// states.csv, metrics.json, frames/, plots/) into out_dir.
OptimizationReport run_and_export(const Scene& scene,
                                  const std::filesystem::path& out_dir,
                                  const RunOverrides& overrides);

int cmd_optimize(const std::string& scene_path,
                 const std::filesystem::path& out_dir,
                 const RunOverrides& overrides);

// One run per clearance value in its own subdirectory, plus a combined
// table.csv (rows G, T, E, C, min_sdf; one column per clearance). Runs are
// independent; CLOTHOPT_THREADS caps how many execute concurrently.
int cmd_sweep(const std::string& scene_path,
              const std::filesystem::path& out_dir,
              const std::vector<double>& deltas, const RunOverrides& overrides);

// The four objective variants {G}, {G+T}, {G+E}, {G+T+E} on an
// obstacle-free scene, plus a grouped bar chart of their final terms.
int cmd_ablate(const std::string& scene_path,
               const std::filesystem::path& out_dir,
               const RunOverrides& overrides);

// Parses arguments and dispatches; all errors are reported on stderr with
// exit code 1.
int run_cli(int argc, const char* const* argv);

}  // namespace clothopt

#endif  // CLOTHOPT_TOOLS_COMMANDS_H_
