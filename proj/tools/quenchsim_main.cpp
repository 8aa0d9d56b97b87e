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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "quench/commands.hpp"
#include "quench/config.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int realizations = 0;
  int threads = 0;
  bool has_seed = false;
  bool has_out_dir = false;
  bool has_realizations = false;
  bool has_threads = false;
};

void add_common_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path, "structured config file");
  cmd->add_option("--seed", f.seed, "master seed (overrides config)")
      ->each([&f](const std::string&) { f.has_seed = true; });
  cmd->add_option("--out-dir", f.out_dir, "output directory (overrides config)")
      ->each([&f](const std::string&) { f.has_out_dir = true; });
  cmd->add_option("--realizations", f.realizations,
                  "coupling realizations (overrides config)")
      ->each([&f](const std::string&) { f.has_realizations = true; });
  cmd->add_option("--threads", f.threads, "worker threads (overrides config)")
      ->each([&f](const std::string&) { f.has_threads = true; });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "quenchsim: random-coupling quench thermalization simulator with a "
      "noisy-hardware emulation pipeline"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"dynamics", "ensemble quench dynamics time series"},
      {"temperature-curve", "equilibrium temperature over all initial states"},
      {"recompile", "variational recompilation of the evolution unitary"},
      {"noisy-run", "noisy circuit emulation with readout unfolding"},
      {"mitigate", "noisy-model fits and zero-noise extrapolation"},
      {"report", "summarize artifacts in the output directory"},
  };
  Flags flags;
  for (const auto& [name, help] : commands) {
    add_common_flags(app.add_subcommand(name, help), flags);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return quench::kExitConfigError;
  }

  quench::ExperimentConfig cfg;
  try {
    if (!flags.config_path.empty()) {
      cfg = quench::load_config_file(flags.config_path);
    } else {
      cfg.validate();
    }
    quench::CliOverrides overrides;
    if (flags.has_seed) overrides.seed = flags.seed;
    if (flags.has_out_dir) overrides.out_dir = flags.out_dir;
    if (flags.has_realizations) overrides.realizations = flags.realizations;
    if (flags.has_threads) overrides.threads = flags.threads;
    quench::apply_overrides(cfg, overrides);
  } catch (const quench::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return quench::kExitConfigError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return quench::run_command(name, cfg);
  } catch (const quench::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return quench::kExitConfigError;
  } catch (const quench::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return quench::kExitNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return quench::kExitNumericalFailure;
  }
}
