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

#include "quench/mitigation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "quench/rng.hpp"
#include "quench/thermo.hpp"

namespace quench {

namespace {

constexpr double kFitBetaMax = 20.0;
constexpr double kGridStep = 0.05;

struct ProfilePoint {
  double g = 0.0;
  double sse = 0.0;
};

// Inner closed-form solution: optimal g for fixed beta is the regression
// coefficient of d = n_bar - u on v = n^th(beta) - u, clamped to [0, 1].
ProfilePoint profile_at(const RealVector& d, const RealVector& energies,
                        double beta) {
  const double u = 1.0 / static_cast<double>(energies.size());
  const RealVector v =
      gibbs_occupations(energies, beta) - RealVector::Constant(energies.size(), u);
  ProfilePoint point;
  const double denom = v.squaredNorm();
  if (denom < 1e-30) {
    point.g = 0.0;
    point.sse = d.squaredNorm();
    return point;
  }
  point.g = std::clamp(d.dot(v) / denom, 0.0, 1.0);
  point.sse = (d - point.g * v).squaredNorm();
  return point;
}

void validate_inputs(const RealVector& n_bar, const RealVector& energies) {
  if (n_bar.size() != energies.size() || n_bar.size() < 2) {
    throw std::invalid_argument("occupation/energy size mismatch");
  }
  if (n_bar.minCoeff() < -1e-9) {
    throw std::invalid_argument("occupations have negative entries");
  }
  if (std::abs(n_bar.sum() - 1.0) > 1e-6) {
    throw std::invalid_argument("occupations do not sum to 1");
  }
  if (!energies.allFinite() || !n_bar.allFinite()) {
    throw std::invalid_argument("non-finite fit input");
  }
}

}  // namespace

NoisyFit fit_noisy_model(const RealVector& n_bar, const RealVector& energies,
                         int n_cnot) {
  validate_inputs(n_bar, energies);
  const Eigen::Index dim = n_bar.size();
  const double u = 1.0 / static_cast<double>(dim);
  const RealVector d = n_bar - RealVector::Constant(dim, u);

  NoisyFit fit;
  if (d.cwiseAbs().maxCoeff() < 1e-12) {
    fit.unidentifiable = true;
    fit.beta = 0.0;
    fit.g = 0.0;
    fit.residual = d.norm();
    return fit;
  }

  double best_beta = 0.0;
  double best_sse = std::numeric_limits<double>::infinity();
  const int n_grid = static_cast<int>(2.0 * kFitBetaMax / kGridStep) + 1;
  for (int i = 0; i < n_grid; ++i) {
    const double beta = -kFitBetaMax + i * kGridStep;
    const double sse = profile_at(d, energies, beta).sse;
    if (sse < best_sse) {
      best_sse = sse;
      best_beta = beta;
    }
  }

  // Golden-section refinement inside the winning grid cell.
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = std::max(-kFitBetaMax, best_beta - kGridStep);
  double hi = std::min(kFitBetaMax, best_beta + kGridStep);
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1 = profile_at(d, energies, x1).sse;
  double f2 = profile_at(d, energies, x2).sse;
  for (int it = 0; it < 90; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = profile_at(d, energies, x1).sse;
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = profile_at(d, energies, x2).sse;
    }
  }
  fit.beta = 0.5 * (lo + hi);
  const ProfilePoint final_point = profile_at(d, energies, fit.beta);
  fit.g = final_point.g;
  fit.residual = std::sqrt(final_point.sse);
  if (n_cnot > 0 && fit.g > 0.0) {
    fit.per_gate_fidelity = std::pow(fit.g, 1.0 / n_cnot);
  }
  return fit;
}

NoisyFit fit_noisy_model_bootstrap(const RealMatrix& rows,
                                   const RealVector& energies, int n_cnot,
                                   int resamples, std::uint64_t seed) {
  const Eigen::Index n_rows = rows.rows();
  if (n_rows < 1 || rows.cols() != energies.size()) {
    throw std::invalid_argument("bootstrap rows/energies mismatch");
  }
  RealVector mean = rows.colwise().mean().transpose();
  NoisyFit fit = fit_noisy_model(mean, energies, n_cnot);
  if (n_rows < 2 || resamples < 2 || fit.unidentifiable) {
    return fit;
  }

  CounterRng rng(derive_seed(seed, kStreamBootstrap));
  std::vector<double> betas;
  std::vector<double> gs;
  betas.reserve(resamples);
  gs.reserve(resamples);
  for (int b = 0; b < resamples; ++b) {
    RealVector acc = RealVector::Zero(energies.size());
    for (Eigen::Index r = 0; r < n_rows; ++r) {
      acc += rows.row(static_cast<Eigen::Index>(
                          rng.uniform_int(static_cast<std::uint64_t>(n_rows))))
                 .transpose();
    }
    acc /= static_cast<double>(n_rows);
    try {
      const NoisyFit f = fit_noisy_model(acc, energies, n_cnot);
      if (!f.unidentifiable) {
        betas.push_back(f.beta);
        gs.push_back(f.g);
      }
    } catch (const std::exception&) {
      // resample failed to fit; skipped below
    }
  }
  if (betas.size() * 10 < static_cast<std::size_t>(resamples) * 9) {
    throw NumericalError("noisy-model bootstrap: under 90% of resamples fit");
  }
  if (betas.size() >= 2) {
    const auto sample_std = [](const std::vector<double>& xs) {
      double m = 0.0;
      for (double x : xs) m += x;
      m /= static_cast<double>(xs.size());
      double s = 0.0;
      for (double x : xs) s += (x - m) * (x - m);
      return std::sqrt(s / static_cast<double>(xs.size() - 1));
    };
    fit.beta_std = sample_std(betas);
    fit.g_std = sample_std(gs);
  }
  return fit;
}

ZneResult zne(const ZnePoint& a, const ZnePoint& b) {
  if (a.lambda == b.lambda) {
    throw std::invalid_argument("ZNE needs two distinct noise factors");
  }
  const ZnePoint& p1 = a.lambda < b.lambda ? a : b;
  const ZnePoint& p2 = a.lambda < b.lambda ? b : a;
  const double span = p2.lambda - p1.lambda;
  const double c1 = p2.lambda / span;
  const double c2 = p1.lambda / span;
  ZneResult res;
  res.beta = c1 * p1.beta - c2 * p2.beta;
  res.std = std::sqrt(c1 * c1 * p1.std * p1.std + c2 * c2 * p2.std * p2.std);
  return res;
}

ZneResult mirrored_zne(const ZnePoint& a, const ZnePoint& b) {
  if (a.lambda == b.lambda) {
    throw std::invalid_argument("ZNE needs two distinct noise factors");
  }
  const ZnePoint& p1 = a.lambda < b.lambda ? a : b;
  const ZnePoint& p2 = a.lambda < b.lambda ? b : a;
  ZnePoint mirrored = p2;
  mirrored.beta = 2.0 * p1.beta - p2.beta;
  ZneResult res = zne(p1, mirrored);
  // Same leverage on both points, so propagate the original stds.
  const double span = p2.lambda - p1.lambda;
  const double c1 = 1.0 - p1.lambda / span;
  const double c2 = p1.lambda / span;
  res.std = std::sqrt(c1 * c1 * p1.std * p1.std + c2 * c2 * p2.std * p2.std);
  if (p1.beta >= 0.0) {
    res.warning = true;
    res.warning_text =
        "mirrored ZNE is meant for the negative-temperature sector "
        "(base-point beta >= 0)";
  }
  return res;
}

MitigatedObservables mitigated_observables(double beta, double beta_std,
                                           const RealVector& energies) {
  if (!std::isfinite(beta) || beta_std < 0.0) {
    throw std::invalid_argument("mitigated observables need finite beta");
  }
  MitigatedObservables out;
  const double var = thermal_energy_variance(energies, beta);
  const double mu3 = thermal_third_central_moment(energies, beta);
  out.mean_h0 = thermal_mean_energy(energies, beta);
  out.mean_h0_err = var * beta_std;
  out.std_h0 = std::sqrt(std::max(0.0, var));
  out.std_h0_err =
      out.std_h0 > 1e-12 ? std::abs(mu3) / (2.0 * out.std_h0) * beta_std : 0.0;
  return out;
}

}  // namespace quench
