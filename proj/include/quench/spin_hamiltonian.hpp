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
#include <vector>

#include "quench/common.hpp"

namespace quench {

/// A register of N non-degenerate qubits with frequencies omega_j (in units
/// of the coupling scale J). The free Hamiltonian is
///   H0 = sum_j (omega_j / 2) * sigma_y_j,
/// and the quench couples the qubits all-to-all with complex Gaussian
/// amplitudes of variance J^2 / N per pair.
///
/// Conventions (fixed throughout the project):
///  - Qubit 1 is the least significant bit of a computational basis index;
///    label strings are written qubit-1-first ("duud" puts qubit 1 down).
///  - 'd' (down) is the -omega/2 eigenstate of sigma_y, 'u' (up) is +omega/2.
struct QuenchSystem {
  int n_qubits = 4;
  std::vector<double> frequencies;  // omega_j, in units of J
  double coupling_scale = 1.0;      // J > 0

  int dim() const { return 1 << n_qubits; }

  /// Throws std::invalid_argument on violated invariants: N in [2, 12],
  /// frequencies strictly positive and pairwise distinct, J > 0.
  void validate() const;
};

/// Canonical four-qubit instance (omega = 0.28, 0.38, 0.63, 0.86 J).
QuenchSystem paper_system();

/// One draw of the pairwise couplings J_{j1 j2}, j1 > j2. Entry order is
/// (1,0), (2,0), (2,1), (3,0), (3,1), (3,2), ... i.e. k = j1(j1-1)/2 + j2
/// with zero-based qubit indices.
struct CouplingSample {
  std::vector<Complex> couplings;
  std::uint64_t seed = 0;
};

/// Index of pair (j1, j2), j1 > j2, inside CouplingSample::couplings.
inline int coupling_index(int j1, int j2) { return j1 * (j1 - 1) / 2 + j2; }

/// Product eigenbasis of H0: 2^N sigma_y product states sorted by energy
/// (ties broken by bitstring value). Column l of `eigenvectors` is the
/// state |l> expressed in the computational (sigma_z) basis.
struct EnergyBasis {
  std::vector<std::uint32_t> labels;  // bitstring per sorted level
  RealVector energies;                // ascending
  Matrix eigenvectors;                // unitary, 2^N x 2^N
  std::vector<int> index_of_label;    // bitstring -> sorted level index

  int dim() const { return static_cast<int>(labels.size()); }
};

/// H0 = sum_j (omega_j / 2) sigma_y_j as a dense matrix in the computational
/// basis. Hermitian and traceless.
Matrix build_h0(const QuenchSystem& sys);

/// Draws all N(N-1)/2 couplings for one realization. Real and imaginary
/// parts are independent Gaussians of variance J^2/(2N), so that
/// <|J_{j1 j2}|^2> = J^2/N. Deterministic given the seed.
CouplingSample sample_couplings(const QuenchSystem& sys, std::uint64_t seed);

/// The quenched interaction
///   V = -sum_{j1 > j2} J_{j1 j2} sigma+_{j1} (prod_k sigma_z_k) sigma-_{j2}
///       + h.c.
/// with the Jordan-Wigner string running over j2 < k < j1 and
/// sigma± = (sigma_x ± i sigma_y)/2. Hermitian; commutes with sum_j sigma_z_j.
Matrix build_interaction(const QuenchSystem& sys, const CouplingSample& sample);

/// Analytic eigenbasis of H0 (tensor products of sigma_y eigenvectors),
/// sorted by ascending energy.
EnergyBasis energy_basis(const QuenchSystem& sys);

/// Smallest gap between adjacent eigenvalues of a Hermitian matrix.
/// Throws std::invalid_argument if `h` is not Hermitian (tolerance 1e-12
/// times the largest magnitude entry, with an absolute floor).
double min_level_spacing(const Matrix& h);

/// Energy of the H0 eigenstate labeled by `bits` (bit j set = qubit j up).
double label_energy(const QuenchSystem& sys, std::uint32_t bits);

/// Parses a state label such as "dduu" or "0011" (qubit 1 first) into a
/// bitstring. Throws std::invalid_argument on malformed input.
std::uint32_t parse_state_label(const std::string& label, int n_qubits);

/// Formats a bitstring as a d/u label, qubit 1 first.
std::string format_state_label(std::uint32_t bits, int n_qubits);

}  // namespace quench
