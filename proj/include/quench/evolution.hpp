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

#include <vector>

#include "quench/common.hpp"
#include "quench/spin_hamiltonian.hpp"

namespace quench {

/// Eigendecomposition of a Hermitian matrix, cached so that many evolution
/// times reuse one solve. h = V diag(lambda) V^dagger.
class Propagator {
 public:
  explicit Propagator(const Matrix& h);

  /// psi(t) = V exp(-i lambda t) V^dagger psi0.
  Vector evolve(const Vector& psi0, double t) const;

  /// Evolves through the unitary exp(-i h t) as a dense matrix.
  Matrix unitary(double t) const;

  const RealVector& eigenvalues() const { return eigenvalues_; }
  const Matrix& eigenvectors() const { return eigenvectors_; }

 private:
  RealVector eigenvalues_;
  Matrix eigenvectors_;
};

/// Uniform time grid t_k = t_min + k dt, inclusive of both ends (the last
/// point is clamped onto t_max when (t_max - t_min)/dt is integral up to
/// rounding).
struct TimeGrid {
  double t_min = 0.0;
  double t_max = 20.0;
  double dt = 0.05;

  std::vector<double> points() const;

  /// Throws std::invalid_argument unless t_min >= 0, dt > 0, t_max > t_min.
  void validate() const;
};

/// Populations |<l|psi>|^2 of the H0 eigenlevels, in sorted-level order.
RealVector occupations(const EnergyBasis& basis, const Vector& psi);

/// <H0> = sum_l energies_l n_l for a population vector in sorted-level order.
double mean_energy(const EnergyBasis& basis, const RealVector& populations);

/// <H0^2> - <H0>^2 for a population vector. Nonnegative up to roundoff.
double energy_variance(const EnergyBasis& basis, const RealVector& populations);

}  // namespace quench
