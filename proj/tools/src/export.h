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

#ifndef CLOTHOPT_TOOLS_EXPORT_H_
#define CLOTHOPT_TOOLS_EXPORT_H_

#include <filesystem>
#include <string>
#include <vector>

#include "clothopt/evaluator.h"
#include "clothopt/optimize.h"

namespace clothopt {

// controls.csv: one row per (time step, control point) with columns
// t,point,dx,dy,dz; t runs 1..T matching the step that consumes the row.
void write_controls_csv(const std::filesystem::path& path,
                        const ControlSequence& controls);

// states.csv: one row per (time step, particle) with columns
// t,particle,x,y,z; t runs 0..T including the initial state.
void write_states_csv(const std::filesystem::path& path,
                      const std::vector<State>& states);

// frames/frame_%03d.obj, one file per state (T+1 files), each carrying the
// full triangulation so deformation is visible in any mesh viewer.
void write_frames_obj(const std::filesystem::path& frames_dir,
                      const std::vector<State>& states, const ClothMesh& mesh);

// metrics.json: final-trajectory metrics, status, seed, and the per-round
// history. Byte-deterministic for identical inputs.
void write_metrics_json(const std::filesystem::path& path,
                        const OptimizationReport& report,
                        const CompiledScene& scene, int seed);

// Reloads the G/T/E/C/min_sdf block of a metrics.json (used by sweep's
// combined table and by consistency checks).
Metrics read_metrics_json(const std::filesystem::path& path);

}  // namespace clothopt

#endif  // CLOTHOPT_TOOLS_EXPORT_H_
