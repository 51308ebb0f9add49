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

#include "commands.h"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <thread>

#include <CLI11.hpp>

#include "export.h"
#include "plots.h"

namespace clothopt {

namespace {

std::string fmt17(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

int parallel_width() {
  const char* raw = std::getenv("CLOTHOPT_THREADS");
  if (!raw) return 1;
  char* end = nullptr;
  const long parsed = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || parsed < 1) return 1;
  return static_cast<int>(std::min(parsed, 64L));
}

// Deterministic run-directory name for one clearance value, e.g. 0.05 ->
// "d005" (hundredths, zero-padded).
std::string sweep_dir_name(double delta) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "d%03d",
                static_cast<int>(std::llround(delta * 100.0)));
  return buffer;
}

OptimizerConfig config_with_overrides(const RunOverrides& overrides) {
  OptimizerConfig config;
  if (overrides.max_rounds) config.max_outer_rounds = *overrides.max_rounds;
  return config;
}

}  // namespace

Scene apply_overrides(Scene scene, const RunOverrides& overrides) {
  if (overrides.delta) {
    if (!scene.obstacle) {
      throw ConfigError(
          "--delta override requires a scene with an obstacle");
    }
    scene.delta = *overrides.delta;
  }
  if (overrides.alpha) scene.weights.alpha = *overrides.alpha;
  if (overrides.beta) scene.weights.beta = *overrides.beta;
  validate_scene(scene);
  return scene;
}

OptimizationReport run_and_export(const Scene& scene,
                                  const std::filesystem::path& out_dir,
                                  const RunOverrides& overrides) {
  const CompiledScene compiled = compile_scene(scene);
  const ControlSequence u_init = initialize_controls(compiled, compiled.init);
  const OptimizationReport report =
      optimize(compiled, u_init, config_with_overrides(overrides));

  const Rollout rolled = rollout(compiled.initial_state, report.best_controls,
                                 compiled.mesh, compiled.params,
                                 /*record=*/false);

  std::filesystem::create_directories(out_dir);
  write_controls_csv(out_dir / "controls.csv", report.best_controls);
  write_states_csv(out_dir / "states.csv", rolled.states);
  write_frames_obj(out_dir / "frames", rolled.states, compiled.mesh);
  write_metrics_json(out_dir / "metrics.json", report, compiled,
                     overrides.seed);
  write_path_plots(out_dir / "plots", compiled, rolled.states);
  write_convergence_plot(out_dir / "plots", report);
  return report;
}

int cmd_optimize(const std::string& scene_path,
                 const std::filesystem::path& out_dir,
                 const RunOverrides& overrides) {
  const Scene scene = apply_overrides(load_scene(scene_path), overrides);
  const OptimizationReport report = run_and_export(scene, out_dir, overrides);
  if (report.status != ConvergenceStatus::kFeasible) {
    std::cerr << "optimize: trajectory is infeasible after "
              << report.rounds.size() << " penalty rounds (C = "
              << report.final_round().metrics.safety << ")\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

int cmd_sweep(const std::string& scene_path,
              const std::filesystem::path& out_dir,
              const std::vector<double>& deltas,
              const RunOverrides& overrides) {
  if (deltas.empty()) {
    throw ConfigError("sweep: at least one clearance value is required");
  }
  std::set<double> unique(deltas.begin(), deltas.end());
  if (unique.size() != deltas.size()) {
    throw ConfigError("sweep: duplicate clearance values");
  }
  std::set<std::string> names;
  for (double delta : deltas) {
    if (!names.insert(sweep_dir_name(delta)).second) {
      throw ConfigError("sweep: clearance values " + fmt17(delta) +
                        " and another map to the same run directory");
    }
  }
  const Scene base = load_scene(scene_path);
  if (!base.obstacle) {
    throw ConfigError("sweep requires a scene with an obstacle");
  }

  struct SweepSlot {
    Metrics metrics;
    ConvergenceStatus status = ConvergenceStatus::kInfeasible;
    std::string error;
  };
  std::vector<SweepSlot> slots(deltas.size());

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next.fetch_add(1); i < deltas.size();
         i = next.fetch_add(1)) {
      try {
        RunOverrides run = overrides;
        run.delta = deltas[i];
        const Scene scene = apply_overrides(base, run);
        const OptimizationReport report =
            run_and_export(scene, out_dir / sweep_dir_name(deltas[i]), run);
        slots[i].metrics = report.final_round().metrics;
        slots[i].status = report.status;
      } catch (const std::exception& e) {
        slots[i].error = e.what();
      }
    }
  };

  const int width =
      std::min<int>(parallel_width(), static_cast<int>(deltas.size()));
  if (width <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < width; ++w) threads.emplace_back(worker);
    for (std::thread& thread : threads) thread.join();
  }

  bool any_error = false, any_infeasible = false;
  for (size_t i = 0; i < deltas.size(); ++i) {
    if (!slots[i].error.empty()) {
      std::cerr << "sweep: delta " << deltas[i] << " failed: "
                << slots[i].error << '\n';
      any_error = true;
    } else if (slots[i].status != ConvergenceStatus::kFeasible) {
      std::cerr << "sweep: delta " << deltas[i] << " is infeasible\n";
      any_infeasible = true;
    }
  }

  std::filesystem::create_directories(out_dir);
  std::ofstream table(out_dir / "table.csv");
  if (!table) {
    throw ConfigError("cannot write file: " + (out_dir / "table.csv").string());
  }
  table << "metric";
  for (double delta : deltas) {
    char label[48];
    std::snprintf(label, sizeof(label), ",delta=%g", delta);
    table << label;
  }
  table << '\n';
  const char* row_names[] = {"G", "T", "E", "C", "min_sdf"};
  for (int row = 0; row < 5; ++row) {
    table << row_names[row];
    for (size_t i = 0; i < deltas.size(); ++i) {
      table << ',';
      if (slots[i].error.empty()) {
        const Metrics& m = slots[i].metrics;
        const double value = row == 0   ? m.target_error
                             : row == 1 ? m.irregularity
                             : row == 2 ? m.energy
                             : row == 3 ? m.safety
                                        : m.min_sdf;
        table << fmt17(value);
      }
    }
    table << '\n';
  }

  if (any_error) return kExitError;
  if (any_infeasible) return kExitInfeasible;
  return kExitOk;
}

int cmd_ablate(const std::string& scene_path,
               const std::filesystem::path& out_dir,
               const RunOverrides& overrides) {
  const Scene base = apply_overrides(load_scene(scene_path), overrides);
  if (base.obstacle) {
    throw ConfigError("ablate requires an obstacle-free scene");
  }

  struct Variant {
    const char* name;
    bool keep_alpha;
    bool keep_beta;
  };
  const Variant variants[] = {
      {"g_only", false, false},
      {"g_t", true, false},
      {"g_e", false, true},
      {"g_t_e", true, true},
  };

  std::vector<std::string> names;
  std::vector<Metrics> metrics;
  bool any_infeasible = false;
  for (const Variant& variant : variants) {
    Scene scene = base;
    if (!variant.keep_alpha) scene.weights.alpha = 0.0;
    if (!variant.keep_beta) scene.weights.beta = 0.0;
    const OptimizationReport report =
        run_and_export(scene, out_dir / variant.name, overrides);
    names.push_back(variant.name);
    metrics.push_back(report.final_round().metrics);
    any_infeasible |= report.status != ConvergenceStatus::kFeasible;
  }
  write_ablation_chart(out_dir / "ablation.svg", names, metrics);
  return any_infeasible ? kExitInfeasible : kExitOk;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"differentiable quasi-static cloth trajectory optimizer"};
  app.require_subcommand(1);

  std::string scene_path;
  std::string out_dir;
  RunOverrides overrides;
  double delta_value = 0.0;
  double alpha_value = 0.0;
  double beta_value = 0.0;
  int max_rounds_value = 0;
  std::vector<double> delta_list;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scene", scene_path, "scene file (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_option("--alpha", alpha_value,
                    "override the irregularity weight");
    sub->add_option("--beta", beta_value, "override the energy weight");
    sub->add_option("--seed", overrides.seed,
                    "seed recorded in metrics.json (the pipeline is "
                    "deterministic)");
    sub->add_option("--max-rounds", max_rounds_value,
                    "cap on penalty rounds");
  };

  CLI::App* optimize_cmd =
      app.add_subcommand("optimize", "optimize one scene");
  add_common(optimize_cmd);
  optimize_cmd->add_option("--delta", delta_value,
                           "override the safety clearance");

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "one run per safety clearance");
  add_common(sweep_cmd);
  sweep_cmd
      ->add_option("--delta-list", delta_list,
                   "comma-separated clearance values")
      ->delimiter(',')
      ->required();

  CLI::App* ablate_cmd =
      app.add_subcommand("ablate", "run the four objective variants");
  add_common(ablate_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  try {
    auto fill = [&](CLI::App* sub) {
      if (sub->count("--alpha")) overrides.alpha = alpha_value;
      if (sub->count("--beta")) overrides.beta = beta_value;
      if (sub->count("--max-rounds")) overrides.max_rounds = max_rounds_value;
    };
    if (optimize_cmd->parsed()) {
      fill(optimize_cmd);
      if (optimize_cmd->count("--delta")) overrides.delta = delta_value;
      return cmd_optimize(scene_path, out_dir, overrides);
    }
    if (sweep_cmd->parsed()) {
      fill(sweep_cmd);
      return cmd_sweep(scene_path, out_dir, delta_list, overrides);
    }
    fill(ablate_cmd);
    return cmd_ablate(scene_path, out_dir, overrides);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace clothopt
