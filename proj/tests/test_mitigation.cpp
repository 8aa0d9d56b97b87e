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

#include <cmath>

#include <doctest.h>

#include "quench/mitigation.hpp"
#include "quench/rng.hpp"
#include "quench/spin_hamiltonian.hpp"
#include "quench/thermo.hpp"

using namespace quench;

namespace {

RealVector canonical_energies() { return energy_basis(paper_system()).energies; }

RealVector noisy_occupations(const RealVector& e, double beta, double g) {
  const int dim = static_cast<int>(e.size());
  return g * gibbs_occupations(e, beta) +
         (1.0 - g) * RealVector::Constant(dim, 1.0 / dim);
}

}  // namespace

TEST_CASE("fit_noisy_model inverts the two-parameter depolarized Gibbs"
          " model") {
  const RealVector e = canonical_energies();
  for (double beta : {-3.0, -1.0, -0.3, 0.3, 1.0, 3.0}) {
    for (double g : {0.3, 0.6, 0.9}) {
      const NoisyFit fit =
          fit_noisy_model(noisy_occupations(e, beta, g), e, 60);
      CHECK(std::abs(fit.beta - beta) < 1e-6);
      CHECK(std::abs(fit.g - g) < 1e-6);
      CHECK(fit.residual < 1e-8);
      CHECK(!fit.unidentifiable);
      CHECK(std::abs(fit.per_gate_fidelity - std::pow(g, 1.0 / 60.0)) < 1e-7);
    }
  }
}

TEST_CASE("fit_noisy_model flags degenerate inputs") {
  const RealVector e = canonical_energies();

  const NoisyFit uniform =
      fit_noisy_model(RealVector::Constant(16, 1.0 / 16.0), e, 60);
  CHECK(uniform.unidentifiable);
  CHECK(uniform.beta == 0.0);
  CHECK(uniform.g == 0.0);

  // n_cnot = 0 leaves the per-gate fidelity undefined.
  const NoisyFit raw = fit_noisy_model(noisy_occupations(e, 1.0, 0.8), e, 0);
  CHECK(raw.per_gate_fidelity == 0.0);
  CHECK(std::abs(raw.g - 0.8) < 1e-6);

  // Off-model input still fits but leaves a visible residual.
  RealVector off = noisy_occupations(e, 0.7, 0.8);
  off(0) += 0.05;
  off /= off.sum();
  const NoisyFit off_fit = fit_noisy_model(off, e, 60);
  CHECK(off_fit.residual > 1e-3);
}

TEST_CASE("fit_noisy_model_bootstrap reports spread over rows") {
  const RealVector e = canonical_energies();
  const RealVector base = noisy_occupations(e, 1.2, 0.7);

  // Identical rows: the point fit with zero spread.
  RealMatrix rows(8, 16);
  for (int r = 0; r < 8; ++r) rows.row(r) = base.transpose();
  // Every resample fits the same beta; the spread is pure float noise from
  // averaging identical fit values.
  const NoisyFit flat = fit_noisy_model_bootstrap(rows, e, 60, 100, 3);
  CHECK(std::abs(flat.beta - 1.2) < 1e-6);
  CHECK(flat.beta_std < 1e-12);
  CHECK(flat.g_std < 1e-12);

  // Perturbed rows: nonzero stds, deterministic under the seed.
  CounterRng rng(41);
  RealMatrix jitter(8, 16);
  for (int r = 0; r < 8; ++r) {
    RealVector row = base;
    for (int l = 0; l < 16; ++l) {
      row(l) = std::max(1e-6, row(l) + 0.01 * rng.gaussian());
    }
    jitter.row(r) = (row / row.sum()).transpose();
  }
  const NoisyFit a = fit_noisy_model_bootstrap(jitter, e, 60, 100, 5);
  const NoisyFit b = fit_noisy_model_bootstrap(jitter, e, 60, 100, 5);
  CHECK(a.beta_std > 0.0);
  CHECK(a.beta == b.beta);
  CHECK(a.beta_std == b.beta_std);
}

TEST_CASE("fit_noisy_model_bootstrap raises when resamples keep failing") {
  const RealVector e = canonical_energies();
  // One informative row and one exactly uniform row. A quarter of the
  // resamples draw the uniform row twice, are unidentifiable, and get
  // skipped, blowing the 10% failure budget.
  RealMatrix rows(2, 16);
  rows.row(0) = noisy_occupations(e, 1.2, 0.9).transpose();
  rows.row(1) = RealVector::Constant(16, 1.0 / 16.0).transpose();
  CHECK_THROWS_AS(fit_noisy_model_bootstrap(rows, e, 60, 200, 7),
                  NumericalError);
}

TEST_CASE("zne extrapolates the canonical lambda pair linearly") {
  const ZnePoint p1{1.0, 1.0, 0.1};
  const ZnePoint p3{3.0, 0.6, 0.3};

  const ZneResult r = zne(p1, p3);
  CHECK(std::abs(r.beta - (3.0 * 1.0 - 0.6) / 2.0) < 1e-15);
  CHECK(std::abs(r.std - 0.5 * std::sqrt(9.0 * 0.01 + 0.09)) < 1e-15);
  CHECK(!r.warning);

  // Argument order is irrelevant.
  const ZneResult swapped = zne(p3, p1);
  CHECK(swapped.beta == r.beta);
  CHECK(swapped.std == r.std);

  // General pair, checked against the line through the two points.
  const ZnePoint a{1.0, 2.0, 0.0};
  const ZnePoint b{5.0, 1.0, 0.0};
  CHECK(std::abs(zne(a, b).beta - 2.25) < 1e-15);

  CHECK_THROWS_AS(zne(p1, ZnePoint{1.0, 0.5, 0.0}), std::invalid_argument);
}

TEST_CASE("mirrored_zne averages the canonical pair and warns out of"
          " domain") {
  const ZnePoint p1{1.0, -2.945, 0.0};
  const ZnePoint p3{3.0, 0.645, 0.0};

  const ZneResult r = mirrored_zne(p1, p3);
  CHECK(std::abs(r.beta - (-1.15)) < 1e-12);
  CHECK(!r.warning);

  const ZnePoint q1{1.0, -1.0, 0.2};
  const ZnePoint q3{3.0, -0.4, 0.4};
  const ZneResult s = mirrored_zne(q1, q3);
  CHECK(std::abs(s.beta - 0.5 * (-1.0 - 0.4)) < 1e-15);
  CHECK(std::abs(s.std - 0.5 * std::sqrt(0.04 + 0.16)) < 1e-15);

  // The mirror trick targets the inverted-population sector; a positive
  // base point triggers the warning.
  const ZneResult warned =
      mirrored_zne(ZnePoint{1.0, 0.5, 0.0}, ZnePoint{3.0, 0.2, 0.0});
  CHECK(warned.warning);
  CHECK(!warned.warning_text.empty());

  CHECK_THROWS_AS(mirrored_zne(p1, ZnePoint{1.0, 0.1, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("mitigated_observables propagates the temperature error to first"
          " order") {
  const RealVector e = canonical_energies();
  const double beta = 0.9;
  const double beta_std = 0.07;

  const MitigatedObservables obs = mitigated_observables(beta, beta_std, e);
  const double var = thermal_energy_variance(e, beta);
  const double mu3 = thermal_third_central_moment(e, beta);

  CHECK(std::abs(obs.mean_h0 - thermal_mean_energy(e, beta)) < 1e-14);
  CHECK(std::abs(obs.mean_h0_err - var * beta_std) < 1e-12);
  CHECK(std::abs(obs.std_h0 - std::sqrt(var)) < 1e-14);
  CHECK(std::abs(obs.std_h0_err -
                 std::abs(mu3) / (2.0 * std::sqrt(var)) * beta_std) < 1e-12);

  // Cross-check the first-order propagation against finite differences.
  const double h = 1e-6;
  const double fd_mean = (thermal_mean_energy(e, beta + h) -
                          thermal_mean_energy(e, beta - h)) /
                         (2 * h);
  CHECK(std::abs(obs.mean_h0_err - std::abs(fd_mean) * beta_std) < 1e-6);
}
