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
#include <functional>
#include <string>
#include <vector>

#include "quench/evolution.hpp"
#include "quench/spin_hamiltonian.hpp"

namespace quench {

/// Full description of one ensemble run: system, initial H0 eigenstate,
/// number of coupling realizations, time grid, equilibrium window, seeds.
struct ProtocolConfig {
  QuenchSystem sys = paper_system();
  std::string initial_state = "dddd";  // d/u per qubit, qubit 1 first
  int realizations = 100;
  TimeGrid grid;                    // [0, 20]/J, step 0.05/J
  double window_start = 2.5;        // equilibrium window, units 1/J
  double window_end = 20.0;
  std::uint64_t seed = 83;          // master seed
  int bootstrap_resamples = 200;
  int threads = 1;

  std::uint32_t initial_bits() const;

  /// Throws std::invalid_argument on malformed configs. R = 1 is accepted
  /// (means degenerate to the single realization) even though production
  /// runs want R >> 1.
  void validate() const;
};

/// Ensemble averages plus the per-realization raw data needed for bootstrap
/// resampling. All time series are indexed [time][level], levels in
/// ascending-energy order.
struct EnsembleResult {
  std::vector<double> times;
  RealMatrix mean_occupations;     // n_times x 2^N, <<n_l(t)>>
  RealVector mean_h0;              // <<H0(t)>>
  RealVector mean_h0_sq;           // <<H0^2(t)>>
  RealVector mean_total_energy;    // <<H(t)>>, constant in t up to roundoff
  RealVector window_occupations;   // time average over the window
  double initial_energy = 0.0;     // eps_in of the initial eigenstate
  double max_energy_drift = 0.0;   // worst per-realization |<H>(t) - <H>(0)|

  // Raw per-realization data, retained for bootstrap.
  std::vector<RealMatrix> realization_occupations;  // R of n_times x 2^N
  RealMatrix realization_window;                    // R x 2^N
  RealVector realization_total_energy;              // R
  std::vector<std::uint64_t> realization_seeds;

  ProtocolConfig config;

  int n_realizations() const {
    return static_cast<int>(realization_seeds.size());
  }
};

/// Runs the quench over R coupling realizations. Deterministic given the
/// master seed, independent of thread count. Throws NumericalError tagged
/// with the realization index if a propagation fails.
EnsembleResult run_protocol(const ProtocolConfig& cfg);

/// Time average of the ensemble-mean occupations over grid points with
/// window_start <= t <= window_end. Throws std::invalid_argument if no grid
/// point falls inside the window.
RealVector equilibrium_average(const EnsembleResult& res, double window_start,
                               double window_end);

/// One bootstrap resample: realization indices drawn with replacement and
/// the means recomputed over them.
class Resample {
 public:
  Resample(const EnsembleResult& res, std::vector<int> indices);

  const RealVector& window_occupations() const { return window_occupations_; }
  RealVector occupations_at(int time_index) const;
  double total_energy() const;
  const std::vector<int>& indices() const { return indices_; }
  const EnsembleResult& parent() const { return *res_; }

 private:
  const EnsembleResult* res_;
  std::vector<int> indices_;
  RealVector window_occupations_;
};

using Statistic = std::function<double(const Resample&)>;

struct BootstrapEstimate {
  double mean = 0.0;
  double std = 0.0;
  int n_success = 0;
  int n_failed = 0;
  std::string warning;  // empty when clean
};

/// Nonparametric bootstrap over realizations: B resamples with replacement,
/// statistic recomputed on each. Failed resamples (statistic throws) are
/// skipped; fewer than 90% successes raises NumericalError. B = 1 reports
/// std = 0 with a warning.
BootstrapEstimate bootstrap(const EnsembleResult& res,
                            const Statistic& statistic, int n_resamples,
                            std::uint64_t seed);

/// Ensemble mean of min_level_spacing(H) over the realizations of `cfg`
/// (fresh Hamiltonian draws, same seed schedule as run_protocol).
double mean_min_level_spacing(const ProtocolConfig& cfg);

}  // namespace quench
