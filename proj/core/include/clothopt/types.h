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

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace clothopt {

using Vec3 = Eigen::Vector3d;
using Eigen::VectorXd;

// Raised for invalid user configuration (scene files, CLI arguments,
// generator parameters).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when the forward simulation produces non-finite positions.
class SimulationDivergedError : public std::runtime_error {
 public:
  SimulationDivergedError(int step_index, const std::string& what)
      : std::runtime_error(what), step_index_(step_index) {}
  int step_index() const { return step_index_; }

 private:
  int step_index_;
};

// Raised on internal consistency failures (tape/rollout mismatch).
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace clothopt
