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

#include "export.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace clothopt {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream stream(path);
  if (!stream) {
    throw ConfigError("cannot write file: " + path.string());
  }
  return stream;
}

const char* status_token(ConvergenceStatus status) {
  return status == ConvergenceStatus::kFeasible ? "feasible" : "infeasible";
}

// JSON has no infinity; an unconstrained run's min_sdf becomes null.
ordered_json sdf_json(double min_sdf) {
  if (std::isinf(min_sdf)) return nullptr;
  return min_sdf;
}

ordered_json metrics_json(const Metrics& metrics) {
  return ordered_json{
      {"G", metrics.target_error},   {"T", metrics.irregularity},
      {"E", metrics.energy},         {"C", metrics.safety},
      {"min_sdf", sdf_json(metrics.min_sdf)}, {"loss", metrics.loss},
  };
}

}  // namespace

void write_controls_csv(const std::filesystem::path& path,
                        const ControlSequence& controls) {
  std::ofstream stream = open_for_write(path);
  stream << "t,point,dx,dy,dz\n";
  for (int t = 0; t < controls.horizon(); ++t) {
    for (int k = 0; k < controls.point_count(); ++k) {
      const Vec3& u = controls.displacements[t][k];
      stream << (t + 1) << ',' << k << ',' << fmt(u.x()) << ',' << fmt(u.y())
             << ',' << fmt(u.z()) << '\n';
    }
  }
}

void write_states_csv(const std::filesystem::path& path,
                      const std::vector<State>& states) {
  std::ofstream stream = open_for_write(path);
  stream << "t,particle,x,y,z\n";
  for (size_t t = 0; t < states.size(); ++t) {
    const std::vector<Vec3>& positions = states[t].positions;
    for (size_t i = 0; i < positions.size(); ++i) {
      stream << t << ',' << i << ',' << fmt(positions[i].x()) << ','
             << fmt(positions[i].y()) << ',' << fmt(positions[i].z()) << '\n';
    }
  }
}

void write_frames_obj(const std::filesystem::path& frames_dir,
                      const std::vector<State>& states,
                      const ClothMesh& mesh) {
  std::filesystem::create_directories(frames_dir);
  for (size_t t = 0; t < states.size(); ++t) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%03zu.obj", t);
    std::ofstream stream = open_for_write(frames_dir / name);
    for (const Vec3& p : states[t].positions) {
      stream << "v " << fmt(p.x()) << ' ' << fmt(p.y()) << ' ' << fmt(p.z())
             << '\n';
    }
    for (const auto& tri : mesh.triangles) {
      stream << "f " << (tri[0] + 1) << ' ' << (tri[1] + 1) << ' '
             << (tri[2] + 1) << '\n';
    }
  }
}

void write_metrics_json(const std::filesystem::path& path,
                        const OptimizationReport& report,
                        const CompiledScene& scene, int seed) {
  ordered_json document = metrics_json(report.final_round().metrics);
  document["status"] = status_token(report.status);
  document["seed"] = seed;
  document["delta"] = scene.constrained() ? ordered_json(scene.delta)
                                          : ordered_json(nullptr);
  ordered_json rounds = ordered_json::array();
  for (const RoundRecord& round : report.rounds) {
    ordered_json entry = metrics_json(round.metrics);
    entry["penalty"] = round.penalty_weight;
    entry["phi"] = round.phi;
    entry["inner_iterations"] = round.inner_iterations;
    entry["phi_history"] = round.phi_history;
    rounds.push_back(std::move(entry));
  }
  document["rounds"] = std::move(rounds);

  std::ofstream stream = open_for_write(path);
  stream << document.dump(2) << '\n';
}

Metrics read_metrics_json(const std::filesystem::path& path) {
  std::ifstream stream(path);
  if (!stream) {
    throw ConfigError("cannot read metrics file: " + path.string());
  }
  ordered_json document;
  try {
    document = ordered_json::parse(stream);
  } catch (const ordered_json::parse_error& e) {
    throw ConfigError(path.string() + ": parse error: " + e.what());
  }
  Metrics metrics;
  metrics.target_error = document.at("G").get<double>();
  metrics.irregularity = document.at("T").get<double>();
  metrics.energy = document.at("E").get<double>();
  metrics.safety = document.at("C").get<double>();
  metrics.min_sdf = document.at("min_sdf").is_null()
                        ? std::numeric_limits<double>::infinity()
                        : document.at("min_sdf").get<double>();
  metrics.loss = document.at("loss").get<double>();
  return metrics;
}

}  // namespace clothopt
