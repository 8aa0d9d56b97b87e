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

#include "quench/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "quench/rng.hpp"

namespace quench {

namespace {

void check_energies(const RealVector& energies) {
  if (energies.size() < 2) {
    throw std::invalid_argument("need at least two energy levels");
  }
}

}  // namespace

RealVector gibbs_occupations(const RealVector& energies, double beta) {
  check_energies(energies);
  if (!std::isfinite(beta)) {
    throw std::invalid_argument("beta must be finite");
  }
  // Shift so the largest Boltzmann exponent is zero.
  const double eps_ref =
      beta >= 0.0 ? energies.minCoeff() : energies.maxCoeff();
  RealVector w(energies.size());
  for (Eigen::Index l = 0; l < energies.size(); ++l) {
    w(l) = std::exp(-beta * (energies(l) - eps_ref));
  }
  return w / w.sum();
}

double log_partition(const RealVector& energies, double beta) {
  check_energies(energies);
  const double eps_ref =
      beta >= 0.0 ? energies.minCoeff() : energies.maxCoeff();
  double s = 0.0;
  for (Eigen::Index l = 0; l < energies.size(); ++l) {
    s += std::exp(-beta * (energies(l) - eps_ref));
  }
  return -beta * eps_ref + std::log(s);
}

double thermal_mean_energy(const RealVector& energies, double beta) {
  return energies.dot(gibbs_occupations(energies, beta));
}

double thermal_energy_variance(const RealVector& energies, double beta) {
  const RealVector n = gibbs_occupations(energies, beta);
  const double mean = energies.dot(n);
  double var = 0.0;
  for (Eigen::Index l = 0; l < energies.size(); ++l) {
    const double d = energies(l) - mean;
    var += n(l) * d * d;
  }
  return var;
}

double thermal_third_central_moment(const RealVector& energies, double beta) {
  const RealVector n = gibbs_occupations(energies, beta);
  const double mean = energies.dot(n);
  double mu3 = 0.0;
  for (Eigen::Index l = 0; l < energies.size(); ++l) {
    const double d = energies(l) - mean;
    mu3 += n(l) * d * d * d;
  }
  return mu3;
}

ThermalFit fit_temperature(const RealVector& occupations,
                           const RealVector& energies) {
  check_energies(energies);
  if (occupations.size() != energies.size()) {
    throw std::invalid_argument("occupation/energy dimension mismatch");
  }
  if (occupations.minCoeff() < -1e-9 ||
      std::abs(occupations.sum() - 1.0) > 1e-6) {
    throw std::invalid_argument("occupations are not a probability vector");
  }
  const double target = energies.dot(occupations);
  const double eps_min = energies.minCoeff();
  const double eps_max = energies.maxCoeff();
  if (!(target > eps_min && target < eps_max)) {
    throw NumericalError(
        "unfittable occupations: mean energy sits at the spectral edge");
  }

  // g(beta) = <H0>_th(beta) - target is strictly decreasing
  // (g' = -Var_th < 0), so a sign change on the bracket pins the root.
  const auto g = [&](double beta) {
    return thermal_mean_energy(energies, beta) - target;
  };
  double lo = -kBetaMax;
  double hi = kBetaMax;
  ThermalFit fit;
  if (g(lo) <= 0.0) {
    fit.beta = lo;
    fit.overflow = true;
  } else if (g(hi) >= 0.0) {
    fit.beta = hi;
    fit.overflow = true;
  } else {
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (g(mid) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    double beta = 0.5 * (lo + hi);
    for (int it = 0; it < 20; ++it) {
      const double val = g(beta);
      if (std::abs(val) < 1e-14) break;
      const double var = thermal_energy_variance(energies, beta);
      double next = beta + val / var;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (g(next) > 0.0) {
        lo = next;
      } else {
        hi = next;
      }
      if (std::abs(next - beta) < 1e-15) {
        beta = next;
        break;
      }
      beta = next;
    }
    fit.beta = beta;
  }
  fit.near_infinite_temperature = std::abs(fit.beta) < kBetaFloor;
  fit.kl = kl_divergence(occupations, gibbs_occupations(energies, fit.beta));
  return fit;
}

double kl_divergence(const RealVector& p, const RealVector& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("KL divergence dimension mismatch");
  }
  double d = 0.0;
  for (Eigen::Index l = 0; l < p.size(); ++l) {
    if (p(l) <= 0.0) continue;
    if (q(l) <= 0.0) {
      throw std::invalid_argument(
          "KL divergence undefined: q vanishes on the support of p");
    }
    d += p(l) * std::log(p(l) / q(l));
  }
  return d;
}

double diagonal_entropy(const RealVector& p) {
  double s = 0.0;
  for (Eigen::Index l = 0; l < p.size(); ++l) {
    if (p(l) > 0.0) s -= p(l) * std::log(p(l));
  }
  return s;
}

double thermal_entropy(const RealVector& energies, double beta) {
  return beta * thermal_mean_energy(energies, beta) +
         log_partition(energies, beta);
}

double free_energy(const RealVector& energies, double beta) {
  if (beta == 0.0) {
    throw std::invalid_argument("free energy diverges at beta = 0");
  }
  return -log_partition(energies, beta) / beta;
}

KlSeries kl_thermal(const EnsembleResult& res, double beta) {
  const EnergyBasis basis = energy_basis(res.config.sys);
  const RealVector& energies = basis.energies;
  const RealVector q = gibbs_occupations(energies, beta);
  const double log_z = log_partition(energies, beta);

  const int n_times = static_cast<int>(res.times.size());
  KlSeries series;
  series.times = res.times;
  series.direct.resize(n_times);
  series.free_energy_form.resize(n_times);
  for (int k = 0; k < n_times; ++k) {
    const RealVector p = res.mean_occupations.row(k).transpose();
    series.direct(k) = kl_divergence(p, q);
    series.free_energy_form(k) =
        -diagonal_entropy(p) + beta * res.mean_h0(k) + log_z;
    if (std::abs(series.direct(k) - series.free_energy_form(k)) > 1e-9) {
      throw NumericalError("KL identity violated at t = " +
                           std::to_string(res.times[k]));
    }
  }
  return series;
}

std::vector<TemperatureCurvePoint> temperature_curve(
    const ProtocolConfig& cfg) {
  cfg.validate();
  const EnergyBasis basis = energy_basis(cfg.sys);
  const RealVector& energies = basis.energies;

  std::vector<TemperatureCurvePoint> curve(basis.dim());
  for (int l = 0; l < basis.dim(); ++l) {
    ProtocolConfig state_cfg = cfg;
    state_cfg.initial_state =
        format_state_label(basis.labels[l], cfg.sys.n_qubits);

    TemperatureCurvePoint& pt = curve[l];
    pt.initial_label = state_cfg.initial_state;
    pt.initial_energy = basis.energies(l);

    const EnsembleResult res = run_protocol(state_cfg);
    pt.diag_entropy = diagonal_entropy(res.window_occupations);
    try {
      const ThermalFit fit = fit_temperature(res.window_occupations, energies);
      pt.beta = fit.beta;
      pt.near_infinite_temperature = fit.near_infinite_temperature;
      pt.thermal_entropy = thermal_entropy(energies, fit.beta);
      const BootstrapEstimate est = bootstrap(
          res,
          [&](const Resample& rs) {
            return fit_temperature(rs.window_occupations(), energies).beta;
          },
          cfg.bootstrap_resamples, derive_seed(cfg.seed, basis.labels[l]));
      pt.beta_std = est.std;
    } catch (const NumericalError&) {
      pt.unfittable = true;
      pt.beta = std::numeric_limits<double>::quiet_NaN();
      pt.beta_std = std::numeric_limits<double>::quiet_NaN();
      pt.thermal_entropy = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return curve;
}

}  // namespace quench
