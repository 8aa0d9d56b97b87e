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

#include "quench/evolution.hpp"

#include <cmath>
#include <stdexcept>

namespace quench {

Propagator::Propagator(const Matrix& h) {
  if (h.rows() != h.cols()) {
    throw std::invalid_argument("Propagator needs a square matrix");
  }
  const double scale = std::max(h.cwiseAbs().maxCoeff(), 1.0);
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("Propagator: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigenvalue solve failed");
  }
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

Vector Propagator::evolve(const Vector& psi0, double t) const {
  if (psi0.size() != eigenvectors_.rows()) {
    throw std::invalid_argument("state dimension mismatch");
  }
  Vector coeffs = eigenvectors_.adjoint() * psi0;
  const Complex i1 = imag_unit();
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
    coeffs(k) *= std::exp(-i1 * eigenvalues_(k) * t);
  }
  return eigenvectors_ * coeffs;
}

Matrix Propagator::unitary(double t) const {
  const Eigen::Index dim = eigenvectors_.rows();
  Vector phases(dim);
  const Complex i1 = imag_unit();
  for (Eigen::Index k = 0; k < dim; ++k) {
    phases(k) = std::exp(-i1 * eigenvalues_(k) * t);
  }
  return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

std::vector<double> TimeGrid::points() const {
  validate();
  std::vector<double> ts;
  const double span = t_max - t_min;
  const auto n_steps = static_cast<long>(std::floor(span / dt + 1e-9));
  ts.reserve(n_steps + 1);
  for (long k = 0; k <= n_steps; ++k) {
    ts.push_back(t_min + static_cast<double>(k) * dt);
  }
  // Snap the final point onto t_max when the grid divides the span evenly.
  if (std::abs(ts.back() - t_max) < 0.5 * dt &&
      std::abs(ts.back() - t_max) > 0.0) {
    ts.back() = t_max;
  }
  return ts;
}

void TimeGrid::validate() const {
  if (!(t_min >= 0.0)) {
    throw std::invalid_argument("time grid must start at t >= 0");
  }
  if (!(dt > 0.0)) {
    throw std::invalid_argument("time step must be positive");
  }
  if (!(t_max > t_min)) {
    throw std::invalid_argument("time grid must have t_max > t_min");
  }
}

RealVector occupations(const EnergyBasis& basis, const Vector& psi) {
  if (psi.size() != basis.eigenvectors.rows()) {
    throw std::invalid_argument("state dimension mismatch");
  }
  const Vector amps = basis.eigenvectors.adjoint() * psi;
  return amps.cwiseAbs2();
}

double mean_energy(const EnergyBasis& basis, const RealVector& populations) {
  if (populations.size() != basis.energies.size()) {
    throw std::invalid_argument("population vector dimension mismatch");
  }
  return basis.energies.dot(populations);
}

double energy_variance(const EnergyBasis& basis,
                       const RealVector& populations) {
  const double mean = mean_energy(basis, populations);
  const double second = basis.energies.cwiseAbs2().dot(populations);
  return second - mean * mean;
}

}  // namespace quench
