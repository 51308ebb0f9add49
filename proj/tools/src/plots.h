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

#ifndef CLOTHOPT_TOOLS_PLOTS_H_
#define CLOTHOPT_TOOLS_PLOTS_H_

#include <filesystem>
#include <string>
#include <vector>

#include "clothopt/evaluator.h"
#include "clothopt/optimize.h"

namespace clothopt {

// Orthographic path renderings of one optimized trajectory:
//   paths_top.svg  — x/y plane (viewed from above)
//   paths_side.svg — y/z plane (viewed from the side)
// Each shows the control-point polylines (T+1 vertices), obstacle
// cross-sections when present, and the initial and final cloth outlines.
void write_path_plots(const std::filesystem::path& plots_dir,
                      const CompiledScene& scene,
                      const std::vector<State>& states);

// convergence.svg — the penalized objective after every accepted inner
// step, concatenated across outer rounds (round boundaries dashed).
void write_convergence_plot(const std::filesystem::path& plots_dir,
                            const OptimizationReport& report);

// Grouped bar chart of (G, T, E) per ablation variant. Bar heights are on
// a log scale of value + 0.1 so near-zero bars stay visible.
void write_ablation_chart(const std::filesystem::path& path,
                          const std::vector<std::string>& variant_names,
                          const std::vector<Metrics>& variant_metrics);

}  // namespace clothopt

#endif  // CLOTHOPT_TOOLS_PLOTS_H_
