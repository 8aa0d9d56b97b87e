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
#include <string>

#include "quench/common.hpp"

namespace quench {

/// Two-parameter fit of the noisy occupation model
///   n_l = g * n^th_l(beta) + (1 - g) / L,
/// where g is the accumulated circuit fidelity (f^n_cnot for a uniform
/// per-gate f).
struct NoisyFit {
  double beta = 0.0;
  double g = 0.0;
  double beta_std = 0.0;
  double g_std = 0.0;
  double residual = 0.0;           // L2 norm of the fit residual
  double per_gate_fidelity = 0.0;  // g^(1/n_cnot), 0 when undefined
  bool unidentifiable = false;     // uniform input, g carries no information
};

/// Least squares in (beta, g): coarse beta grid on [-20, 20], golden-section
/// refinement, with the profiled g(beta) given by the closed-form regression
/// coefficient of (n_bar - 1/L) on (n^th(beta) - 1/L), clamped to [0, 1].
/// Uniform n_bar is flagged unidentifiable with beta = 0, g = 0.
NoisyFit fit_noisy_model(const RealVector& n_bar, const RealVector& energies,
                         int n_cnot);

/// Point fit on the row mean plus bootstrap stds over the rows (one row per
/// dressing or realization). Resamples that fail to fit are skipped; fewer
/// than 90% successes raises NumericalError, fewer than two leaves the stds
/// at 0.
NoisyFit fit_noisy_model_bootstrap(const RealMatrix& rows,
                                   const RealVector& energies, int n_cnot,
                                   int resamples, std::uint64_t seed);

struct ZnePoint {
  double lambda = 1.0;
  double beta = 0.0;
  double std = 0.0;
};

struct ZneResult {
  double beta = 0.0;
  double std = 0.0;
  bool warning = false;
  std::string warning_text;
};

/// Linear extrapolation of two (lambda, beta) points to lambda = 0. For the
/// canonical pair (1, beta1), (3, beta3) this is (3 beta1 - beta3) / 2 with
/// std sqrt(9 s1^2 + s3^2) / 2. Identical lambdas raise invalid_argument.
ZneResult zne(const ZnePoint& a, const ZnePoint& b);

/// Mirrors the amplified point across the base one (beta_m = 2 beta1 -
/// beta3) before extrapolating, which collapses to beta0 = (beta1 + beta3)/2
/// with std sqrt(s1^2 + s3^2)/2 for the canonical pair. Intended for the
/// negative-temperature sector; warns when beta1 >= 0.
ZneResult mirrored_zne(const ZnePoint& a, const ZnePoint& b);

struct MitigatedObservables {
  double mean_h0 = 0.0;
  double mean_h0_err = 0.0;
  double std_h0 = 0.0;
  double std_h0_err = 0.0;
};

/// Thermal <H0> and sqrt(Var H0) at beta with first-order error propagation:
/// d<H0>/dbeta = -Var and dVar/dbeta = -mu3 (third central moment).
MitigatedObservables mitigated_observables(double beta, double beta_std,
                                           const RealVector& energies);

}  // namespace quench
