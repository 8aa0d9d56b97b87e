// Copyright 2026 The quenchsim authors
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

#include <string>

#include "quench/config.hpp"

namespace quench {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalFailure = 3;

// Each command computes everything first and only then writes its files, so
// a failing run leaves no partial outputs. All of them echo the effective
// config (config.txt) and a <command>_meta.json carrying the config hash.
int cmd_dynamics(const ExperimentConfig& cfg);
int cmd_temperature_curve(const ExperimentConfig& cfg);
int cmd_recompile(const ExperimentConfig& cfg);
int cmd_noisy_run(const ExperimentConfig& cfg);
int cmd_mitigate(const ExperimentConfig& cfg);
int cmd_report(const ExperimentConfig& cfg);

/// Dispatches a subcommand by its CLI name. Unknown names raise ConfigError.
int run_command(const std::string& name, const ExperimentConfig& cfg);

}  // namespace quench
