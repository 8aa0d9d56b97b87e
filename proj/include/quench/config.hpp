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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "quench/ensemble.hpp"
#include "quench/noise.hpp"
#include "quench/recompiler.hpp"

namespace quench {

/// User error in a config file or on the command line. Maps to exit code 2;
/// NumericalError maps to exit code 3.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RecompileConfig {
  int layers = 20;        // ansatz depth m
  double time = 10.0;     // evolution time of the target unitary, 1/J
  int realizations = 5;   // coupling realizations to recompile
  RecompileOptions options;
};

/// Noise block: a named preset establishes the baseline, explicit keys
/// override individual strengths.
struct NoiseConfig {
  std::string preset = "default";  // "default" or "none"
  double two_qubit_depolarizing = 0.01;
  double spectator_depolarizing = 0.003;
  double global_f = 0.998;
  double coherent_zz_angle = 0.0;
  ReadoutModel readout;
  RCPolicy rc;
  std::vector<int> noise_factors = {1, 3};

  /// Channels with non-trivial strength, in fixed order.
  NoiseModel build_model() const;
};

struct OutputConfig {
  std::string directory = "out";
  bool per_realization = false;  // emit per-realization H0 traces
  bool write_csv = true;
  bool write_json = true;
};

/// Everything a CLI run needs, file-config plus flag overrides.
struct ExperimentConfig {
  ProtocolConfig protocol;  // carries the QuenchSystem block
  RecompileConfig recompile;
  NoiseConfig noise;
  OutputConfig output;

  /// Canonical rendering: every key in fixed order, shortest round-trip
  /// doubles. parse_config_text(canonical_text()) reproduces the config.
  std::string canonical_text() const;

  /// FNV-1a 64 over canonical_text(). Embedded in every output file.
  std::uint64_t hash() const;

  /// Throws ConfigError when any block violates its invariants.
  void validate() const;
};

/// Key-value parser with [section] headers, # comments, and strict schema
/// checking (unknown sections or keys, duplicates, and unparsable values
/// raise ConfigError with the offending line number).
ExperimentConfig parse_config_text(const std::string& text);

/// parse_config_text on the file contents; missing file raises ConfigError.
ExperimentConfig load_config_file(const std::string& path);

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> realizations;  // sets both protocol and recompile counts
  std::optional<int> threads;
};

void apply_overrides(ExperimentConfig& cfg, const CliOverrides& o);

std::uint64_t fnv1a64(std::string_view s);

/// "0x" + 16 lowercase hex digits.
std::string hash_hex(std::uint64_t h);

}  // namespace quench
