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
#include <vector>

#include "quench/common.hpp"
#include "quench/ensemble.hpp"

namespace quench {

// |beta| below this counts as "effectively infinite temperature".
inline constexpr double kBetaFloor = 1e-3;
// Fits are bracketed on beta in [-kBetaMax, kBetaMax] (units 1/J).
inline constexpr double kBetaMax = 50.0;

/// Maximum-likelihood Gibbs fit of an occupation vector.
struct ThermalFit {
  double beta = 0.0;
  double beta_std = 0.0;  // bootstrap std when available, else 0
  double kl = 0.0;        // KL(input || fitted Gibbs), diagnostic
  bool near_infinite_temperature = false;  // |beta| < kBetaFloor
  bool overflow = false;  // beta pinned at the bracket edge
  std::string method = "mle-energy-matching";
};

/// n_l = exp(-beta eps_l)/Z, computed with max-subtraction so either sign of
/// beta is safe. Sums to 1.
RealVector gibbs_occupations(const RealVector& energies, double beta);

/// ln Z(beta) = ln sum_l exp(-beta eps_l), evaluated stably.
double log_partition(const RealVector& energies, double beta);

/// <H0>_th, Var_th(H0), and the third central moment of the Gibbs state.
double thermal_mean_energy(const RealVector& energies, double beta);
double thermal_energy_variance(const RealVector& energies, double beta);
double thermal_third_central_moment(const RealVector& energies, double beta);

/// Solves sum_l eps_l n_l^th(beta) = sum_l eps_l n_l (the exponential-family
/// maximum-likelihood condition) by bisection plus Newton polish. Throws
/// NumericalError when the target energy lies outside the open spectral
/// interval; sets `overflow` when beta saturates the bracket.
ThermalFit fit_temperature(const RealVector& occupations,
                           const RealVector& energies);

/// KL divergence sum p ln(p/q) with 0 ln 0 := 0. Throws
/// std::invalid_argument when q vanishes on the support of p.
double kl_divergence(const RealVector& p, const RealVector& q);

/// Diagonal entropy S = -sum p ln p, in nats.
double diagonal_entropy(const RealVector& p);

/// Thermal entropy S_th = beta <H0>_th + ln Z (well defined at beta = 0).
double thermal_entropy(const RealVector& energies, double beta);

/// Free energy F = -ln Z / beta. Throws std::invalid_argument at beta = 0
/// where F diverges; callers wanting the Eq.-style combination
/// (<H0> - F)/T should use beta*<H0> + ln Z, which stays finite.
double free_energy(const RealVector& energies, double beta);

/// Distance of the averaged occupations from the fitted Gibbs state, per
/// time slice, computed two ways that agree analytically:
/// direct sum p ln(p/q) and -S(t) + beta <<H0(t)>> + ln Z. A mismatch above
/// 1e-9 raises NumericalError.
struct KlSeries {
  std::vector<double> times;
  RealVector direct;
  RealVector free_energy_form;
};
KlSeries kl_thermal(const EnsembleResult& res, double beta);

/// One entry of the temperature curve over initial eigenstates.
struct TemperatureCurvePoint {
  std::string initial_label;
  double initial_energy = 0.0;
  double beta = 0.0;
  double beta_std = 0.0;
  double diag_entropy = 0.0;     // S of the window occupations
  double thermal_entropy = 0.0;  // S_th at the fitted beta
  bool near_infinite_temperature = false;
  bool unfittable = false;
};

/// Runs the full protocol from every H0 eigenstate of cfg.sys (the
/// initial_state field of cfg is ignored) and fits beta per state. Entries
/// come out in ascending initial energy. The same master seed is reused
/// across states so all points share the coupling ensemble.
std::vector<TemperatureCurvePoint> temperature_curve(
    const ProtocolConfig& cfg);

}  // namespace quench
