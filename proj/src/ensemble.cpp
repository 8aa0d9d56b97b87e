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

#include "quench/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "quench/parallel.hpp"
#include "quench/rng.hpp"

namespace quench {

namespace {

std::vector<int> window_indices(const std::vector<double>& times, double t_a,
                                double t_b) {
  std::vector<int> idx;
  for (int k = 0; k < static_cast<int>(times.size()); ++k) {
    if (times[k] >= t_a - 1e-12 && times[k] <= t_b + 1e-12) idx.push_back(k);
  }
  return idx;
}

}  // namespace

std::uint32_t ProtocolConfig::initial_bits() const {
  return parse_state_label(initial_state, sys.n_qubits);
}

void ProtocolConfig::validate() const {
  sys.validate();
  grid.validate();
  if (realizations < 1) {
    throw std::invalid_argument("realizations must be >= 1");
  }
  if (bootstrap_resamples < 1) {
    throw std::invalid_argument("bootstrap_resamples must be >= 1");
  }
  if (threads < 1) {
    throw std::invalid_argument("threads must be >= 1");
  }
  if (!(window_start >= grid.t_min && window_end <= grid.t_max + 1e-12 &&
        window_start < window_end)) {
    throw std::invalid_argument("equilibrium window must lie inside the grid");
  }
  parse_state_label(initial_state, sys.n_qubits);
}

EnsembleResult run_protocol(const ProtocolConfig& cfg) {
  cfg.validate();
  const int dim = cfg.sys.dim();
  const EnergyBasis basis = energy_basis(cfg.sys);
  const Matrix h0 = build_h0(cfg.sys);
  const std::vector<double> times = cfg.grid.points();
  const int n_times = static_cast<int>(times.size());
  const int n_real = cfg.realizations;

  const std::uint32_t bits = cfg.initial_bits();
  const int level = basis.index_of_label[bits];
  const Vector psi_in = basis.eigenvectors.col(level);

  const std::vector<int> widx =
      window_indices(times, cfg.window_start, cfg.window_end);
  if (widx.empty()) {
    throw std::invalid_argument("equilibrium window contains no grid points");
  }

  EnsembleResult res;
  res.config = cfg;
  res.times = times;
  res.initial_energy = basis.energies(level);
  res.realization_occupations.assign(n_real, RealMatrix());
  res.realization_window.resize(n_real, dim);
  res.realization_total_energy.resize(n_real);
  res.realization_seeds.resize(n_real);

  std::vector<RealVector> total_series(n_real);
  std::vector<double> drift(n_real, 0.0);

  const std::uint64_t stream = derive_seed(cfg.seed, kStreamRealizations);
  parallel_for(n_real, cfg.threads, [&](int r) {
    const std::uint64_t rseed = derive_seed(stream, r);
    res.realization_seeds[r] = rseed;
    try {
      const CouplingSample sample = sample_couplings(cfg.sys, rseed);
      const Matrix h = h0 + build_interaction(cfg.sys, sample);
      const Propagator prop(h);
      RealMatrix occ(n_times, dim);
      RealVector total(n_times);
      for (int k = 0; k < n_times; ++k) {
        const Vector psi = prop.evolve(psi_in, times[k]);
        occ.row(k) = occupations(basis, psi).transpose();
        total(k) = std::real(psi.dot(h * psi));
      }
      RealVector window = RealVector::Zero(dim);
      for (int k : widx) window += occ.row(k).transpose();
      window /= static_cast<double>(widx.size());

      res.realization_occupations[r] = std::move(occ);
      res.realization_window.row(r) = window.transpose();
      res.realization_total_energy(r) = total(0);
      for (int k = 0; k < n_times; ++k) {
        drift[r] = std::max(drift[r], std::abs(total(k) - total(0)));
      }
      total_series[r] = std::move(total);
    } catch (const NumericalError& e) {
      throw NumericalError("realization " + std::to_string(r) + ": " +
                           e.what());
    }
  });

  const double inv_r = 1.0 / static_cast<double>(n_real);
  res.mean_occupations = pairwise_sum(res.realization_occupations) * inv_r;
  res.mean_total_energy = pairwise_sum(total_series) * inv_r;
  res.mean_h0 = res.mean_occupations * basis.energies;
  res.mean_h0_sq = res.mean_occupations * basis.energies.cwiseAbs2();
  res.max_energy_drift = *std::max_element(drift.begin(), drift.end());
  res.window_occupations =
      equilibrium_average(res, cfg.window_start, cfg.window_end);
  return res;
}

RealVector equilibrium_average(const EnsembleResult& res, double window_start,
                               double window_end) {
  const std::vector<int> widx =
      window_indices(res.times, window_start, window_end);
  if (widx.empty()) {
    throw std::invalid_argument("equilibrium window contains no grid points");
  }
  RealVector avg = RealVector::Zero(res.mean_occupations.cols());
  for (int k : widx) avg += res.mean_occupations.row(k).transpose();
  return avg / static_cast<double>(widx.size());
}

Resample::Resample(const EnsembleResult& res, std::vector<int> indices)
    : res_(&res), indices_(std::move(indices)) {
  if (indices_.empty()) {
    throw std::invalid_argument("resample needs at least one index");
  }
  RealVector acc = RealVector::Zero(res.realization_window.cols());
  for (int i : indices_) acc += res.realization_window.row(i).transpose();
  window_occupations_ = acc / static_cast<double>(indices_.size());
}

RealVector Resample::occupations_at(int time_index) const {
  if (time_index < 0 ||
      time_index >= static_cast<int>(res_->times.size())) {
    throw std::invalid_argument("time index out of range");
  }
  RealVector acc = RealVector::Zero(res_->realization_window.cols());
  for (int i : indices_) {
    acc += res_->realization_occupations[i].row(time_index).transpose();
  }
  return acc / static_cast<double>(indices_.size());
}

double Resample::total_energy() const {
  double acc = 0.0;
  for (int i : indices_) acc += res_->realization_total_energy(i);
  return acc / static_cast<double>(indices_.size());
}

BootstrapEstimate bootstrap(const EnsembleResult& res,
                            const Statistic& statistic, int n_resamples,
                            std::uint64_t seed) {
  const int n_real = res.n_realizations();
  if (n_real < 1) {
    throw std::invalid_argument("bootstrap needs retained realizations");
  }
  if (n_resamples < 1) {
    throw std::invalid_argument("bootstrap needs at least one resample");
  }
  CounterRng rng(derive_seed(seed, kStreamBootstrap));

  std::vector<double> values;
  values.reserve(n_resamples);
  int failed = 0;
  for (int b = 0; b < n_resamples; ++b) {
    std::vector<int> idx(n_real);
    for (int i = 0; i < n_real; ++i) {
      idx[i] = static_cast<int>(rng.uniform_int(n_real));
    }
    try {
      values.push_back(statistic(Resample(res, idx)));
    } catch (const std::exception&) {
      ++failed;
    }
  }
  if (static_cast<double>(values.size()) <
      0.9 * static_cast<double>(n_resamples)) {
    throw NumericalError("more than 10% of bootstrap resamples failed (" +
                         std::to_string(failed) + " of " +
                         std::to_string(n_resamples) + ")");
  }

  BootstrapEstimate est;
  est.n_success = static_cast<int>(values.size());
  est.n_failed = failed;
  double sum = 0.0;
  for (double v : values) sum += v;
  est.mean = sum / est.n_success;
  if (est.n_success >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - est.mean) * (v - est.mean);
    est.std = std::sqrt(ss / (est.n_success - 1));
  } else {
    est.std = 0.0;
    est.warning = "single bootstrap resample; std reported as 0";
  }
  return est;
}

double mean_min_level_spacing(const ProtocolConfig& cfg) {
  cfg.validate();
  const Matrix h0 = build_h0(cfg.sys);
  const std::uint64_t stream = derive_seed(cfg.seed, kStreamRealizations);
  std::vector<double> gaps(cfg.realizations);
  parallel_for(cfg.realizations, cfg.threads, [&](int r) {
    const std::uint64_t rseed = derive_seed(stream, r);
    const CouplingSample sample = sample_couplings(cfg.sys, rseed);
    gaps[r] = min_level_spacing(h0 + build_interaction(cfg.sys, sample));
  });
  return pairwise_sum(gaps) / static_cast<double>(cfg.realizations);
}

}  // namespace quench
