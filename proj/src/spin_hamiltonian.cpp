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

#include "quench/spin_hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "quench/rng.hpp"

namespace quench {

namespace {

constexpr int kMaxQubits = 12;

}  // namespace

void QuenchSystem::validate() const {
  if (n_qubits < 2 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("n_qubits must lie in [2, 12], got " +
                                std::to_string(n_qubits));
  }
  if (static_cast<int>(frequencies.size()) != n_qubits) {
    throw std::invalid_argument("expected " + std::to_string(n_qubits) +
                                " frequencies, got " +
                                std::to_string(frequencies.size()));
  }
  if (!(coupling_scale > 0.0)) {
    throw std::invalid_argument("coupling_scale must be positive");
  }
  for (int j = 0; j < n_qubits; ++j) {
    if (!(frequencies[j] > 0.0)) {
      throw std::invalid_argument("frequencies must be strictly positive");
    }
  }
  for (int a = 0; a < n_qubits; ++a) {
    for (int b = a + 1; b < n_qubits; ++b) {
      if (frequencies[a] == frequencies[b]) {
        throw std::invalid_argument(
            "frequencies must be pairwise distinct (degenerate spectrum)");
      }
    }
  }
}

QuenchSystem paper_system() {
  QuenchSystem sys;
  sys.n_qubits = 4;
  sys.frequencies = {0.28, 0.38, 0.63, 0.86};
  sys.coupling_scale = 1.0;
  return sys;
}

Matrix build_h0(const QuenchSystem& sys) {
  sys.validate();
  const int dim = sys.dim();
  Matrix h0 = Matrix::Zero(dim, dim);
  const Complex i1 = imag_unit();
  // sigma_y_j in the computational basis: |b> -> i (-1)^{b_j} |b ^ (1<<j)>.
  for (int j = 0; j < sys.n_qubits; ++j) {
    const double half = 0.5 * sys.frequencies[j] * sys.coupling_scale;
    for (int b = 0; b < dim; ++b) {
      const int flipped = b ^ (1 << j);
      const double sign = (b >> j) & 1 ? -1.0 : 1.0;
      h0(flipped, b) += half * i1 * sign;
    }
  }
  return h0;
}

CouplingSample sample_couplings(const QuenchSystem& sys, std::uint64_t seed) {
  sys.validate();
  CouplingSample sample;
  sample.seed = seed;
  const int n_pairs = sys.n_qubits * (sys.n_qubits - 1) / 2;
  sample.couplings.resize(n_pairs);
  // <|J|^2> = J^2 / N: each quadrature has variance J^2 / (2N).
  const double sigma = sys.coupling_scale / std::sqrt(2.0 * sys.n_qubits);
  CounterRng rng(seed);
  for (int j1 = 1; j1 < sys.n_qubits; ++j1) {
    for (int j2 = 0; j2 < j1; ++j2) {
      const double re = sigma * rng.gaussian();
      const double im = sigma * rng.gaussian();
      sample.couplings[coupling_index(j1, j2)] = Complex(re, im);
    }
  }
  return sample;
}

Matrix build_interaction(const QuenchSystem& sys,
                         const CouplingSample& sample) {
  sys.validate();
  const int n_pairs = sys.n_qubits * (sys.n_qubits - 1) / 2;
  if (static_cast<int>(sample.couplings.size()) != n_pairs) {
    throw std::invalid_argument("coupling sample has wrong arity");
  }
  const int dim = sys.dim();
  Matrix v = Matrix::Zero(dim, dim);
  // sigma+_{j1} (prod_{j2<k<j1} sigma_z_k) sigma-_{j2} maps |b> with bit j2
  // set and bit j1 clear to (JW sign) |b ^ (1<<j1) ^ (1<<j2)>.
  for (int j1 = 1; j1 < sys.n_qubits; ++j1) {
    for (int j2 = 0; j2 < j1; ++j2) {
      const Complex amp = -sample.couplings[coupling_index(j1, j2)];
      for (int b = 0; b < dim; ++b) {
        if (((b >> j2) & 1) == 0 || ((b >> j1) & 1) == 1) continue;
        int z_ones = 0;
        for (int k = j2 + 1; k < j1; ++k) z_ones += (b >> k) & 1;
        const double phase = (z_ones & 1) ? -1.0 : 1.0;
        const int target = b ^ (1 << j1) ^ (1 << j2);
        v(target, b) += amp * phase;
        v(b, target) += std::conj(amp * phase);
      }
    }
  }
  return v;
}

EnergyBasis energy_basis(const QuenchSystem& sys) {
  sys.validate();
  const int n = sys.n_qubits;
  const int dim = sys.dim();
  EnergyBasis basis;
  basis.labels.resize(dim);
  basis.energies.resize(dim);
  basis.eigenvectors = Matrix::Zero(dim, dim);
  basis.index_of_label.assign(dim, -1);

  std::vector<std::uint32_t> order(dim);
  std::iota(order.begin(), order.end(), 0u);
  std::vector<double> energy_of(dim);
  for (int b = 0; b < dim; ++b) {
    energy_of[b] = label_energy(sys, static_cast<std::uint32_t>(b));
  }
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) {
              if (energy_of[a] != energy_of[b]) {
                return energy_of[a] < energy_of[b];
              }
              return a < b;
            });

  // sigma_y eigenvectors in the computational basis:
  //   |d>_y = (|0> - i|1>) / sqrt(2),  |u>_y = (|0> + i|1>) / sqrt(2).
  const double inv_norm = std::pow(std::sqrt(0.5), n);
  const Complex i1 = imag_unit();
  for (int l = 0; l < dim; ++l) {
    const std::uint32_t bits = order[l];
    basis.labels[l] = bits;
    basis.energies(l) = energy_of[bits];
    basis.index_of_label[bits] = l;
    for (int b = 0; b < dim; ++b) {
      // Component on |b>: product over qubits of 1 (bit clear) or ±i (set).
      Complex amp(1.0, 0.0);
      for (int j = 0; j < n; ++j) {
        if (((b >> j) & 1) == 0) continue;
        amp *= ((bits >> j) & 1) ? i1 : -i1;
      }
      basis.eigenvectors(b, l) = amp * inv_norm;
    }
  }
  return basis;
}

double min_level_spacing(const Matrix& h) {
  if (h.rows() != h.cols() || h.rows() < 2) {
    throw std::invalid_argument("min_level_spacing needs a square matrix");
  }
  const double scale = h.cwiseAbs().maxCoeff();
  const double tol = std::max(1e-12 * scale, 1e-14);
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument("min_level_spacing: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h,
                                               Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigenvalue solve failed");
  }
  const RealVector& ev = solver.eigenvalues();
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < ev.size(); ++i) {
    gap = std::min(gap, ev(i + 1) - ev(i));
  }
  return gap;
}

double label_energy(const QuenchSystem& sys, std::uint32_t bits) {
  double e = 0.0;
  for (int j = 0; j < sys.n_qubits; ++j) {
    const double half = 0.5 * sys.frequencies[j] * sys.coupling_scale;
    e += ((bits >> j) & 1) ? half : -half;
  }
  return e;
}

std::uint32_t parse_state_label(const std::string& label, int n_qubits) {
  if (static_cast<int>(label.size()) != n_qubits) {
    throw std::invalid_argument("state label '" + label + "' must have " +
                                std::to_string(n_qubits) + " characters");
  }
  std::uint32_t bits = 0;
  for (int j = 0; j < n_qubits; ++j) {
    const char c = label[j];
    if (c == 'u' || c == 'U' || c == '1') {
      bits |= 1u << j;
    } else if (c != 'd' && c != 'D' && c != '0') {
      throw std::invalid_argument("state label '" + label +
                                  "' has invalid character");
    }
  }
  return bits;
}

std::string format_state_label(std::uint32_t bits, int n_qubits) {
  std::string label(n_qubits, 'd');
  for (int j = 0; j < n_qubits; ++j) {
    if ((bits >> j) & 1) label[j] = 'u';
  }
  return label;
}

}  // namespace quench
