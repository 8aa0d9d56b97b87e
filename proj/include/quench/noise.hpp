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
#include <functional>
#include <vector>

#include "quench/circuit.hpp"
#include "quench/common.hpp"
#include "quench/rng.hpp"
#include "quench/spin_hamiltonian.hpp"

namespace quench {

/// One noise channel attached to every CNOT of a circuit. The placement
/// decides which qubits it acts on once the CNOT's pair is known.
struct NoiseChannel {
  enum class Kind {
    kTwoQubitDepolarizing,  // strength p on the active pair
    kLocalDepolarizing,     // strength p per placed qubit
    kGlobalDepolarizing,    // rho -> f rho + (1-f) I / 2^N
    kPauli,                 // 16 two-qubit Pauli probabilities, active pair
    kCoherentOverRotation,  // exp(-i angle/2 sigma_a x sigma_b), active pair
  };
  enum class Placement { kActivePair, kSpectators, kGlobal };

  Kind kind = Kind::kGlobalDepolarizing;
  Placement placement = Placement::kGlobal;
  double p = 0.0;          // depolarizing strength
  double f = 1.0;          // global depolarizing fidelity
  RealVector pauli_probs;  // kPauli: index = 4*i_control + i_target, IXYZ
  double angle = 0.0;      // kCoherentOverRotation
  char axis0 = 'Z';        // generator factor on the control
  char axis1 = 'Z';        // generator factor on the target

  void validate() const;  // throws std::invalid_argument
};

using NoiseModel = std::vector<NoiseChannel>;

/// The synthetic stand-in for the paper's hardware: per CNOT, two-qubit
/// depolarizing p = 0.01 on the active pair, local depolarizing p = 0.003 on
/// every spectator, global depolarizing f = 0.998.
NoiseModel default_noise_preset();

/// Per-qubit readout confusion + shot budget. shots = 0 means the exact
/// distribution is used (infinite-shot mode).
struct ReadoutModel {
  double eps0 = 0.01;  // p(read 1 | true 0)
  double eps1 = 0.02;  // p(read 0 | true 1)
  long shots = 1000;
  int ibu_iterations = 10;

  void validate() const;  // eps in [0, 0.5), shots >= 0
  /// Tensor-product response matrix R[measured][true], column-stochastic.
  RealMatrix response_matrix(int n_qubits) const;
};

/// Randomized-compiling policy. samples = 0 disables twirling (one bare run).
struct RCPolicy {
  int samples = 100;
  bool twirl_active = true;      // Pauli pair around each CNOT
  bool twirl_spectators = true;  // G ... G^dag on every spectator

  void validate() const;
};

// Density-matrix plumbing. rho is 2^N x 2^N; gates act as U rho U^dag.
void apply_gate_density(Matrix& rho, const Gate& g, const RealVector& params);
/// g indexes its 4-dim space as bit(q_bit0) | bit(q_bit1) << 1.
void apply_two_qubit_gate_density(Matrix& rho, const Matrix4& g, int q_bit0,
                                  int q_bit1);

void apply_local_depolarizing(Matrix& rho, double p, int qubit);
void apply_two_qubit_depolarizing(Matrix& rho, double p, int qa, int qb);
void apply_global_depolarizing(Matrix& rho, double f);
void apply_pauli_channel(Matrix& rho, const RealVector& probs, int q_control,
                         int q_target);
void apply_coherent_over_rotation(Matrix& rho, double angle, char axis0,
                                  char axis1, int q0, int q1);

/// Dispatches one channel template for a CNOT acting on (control, target).
void apply_channel_for_cnot(Matrix& rho, const NoiseChannel& ch, int control,
                            int target, int n_qubits);

/// Throws NumericalError unless rho is Hermitian (1e-10), unit trace
/// (1e-10), and has eigenvalues >= -1e-9.
void check_density(const Matrix& rho);

/// One twirled copy of the circuit: every CNOT picks up a random two-qubit
/// Pauli in front and its CNOT-conjugate behind (sign folded into the global
/// phase), and every spectator a random G ... G^dag from the 12-element set
/// {P * R : P Pauli, R in {1, exp(-i pi sigma_x/4), exp(-i pi sigma_z/4)}}.
/// The contraction equals the bare circuit exactly.
Circuit rc_dress(const Circuit& c, const RCPolicy& policy, std::uint64_t seed);

/// Frequencies from `shots` multinomial draws (sum 1); probs must be a
/// probability vector.
RealVector multinomial_sample(const RealVector& probs, long shots,
                              CounterRng& rng);

/// Iterative Bayesian unfolding: t_i <- t_i sum_j R_ji m_j / (R t)_j from
/// `prior` (pass uniform for the standard start). Output stays a probability
/// vector at every iteration. Throws NumericalError when (R t)_j vanishes
/// while m_j > 0.
RealVector ibu_unfold(const RealVector& measured, const RealMatrix& response,
                      int iterations, const RealVector& prior);

/// New circuit with the y-basis preparation prefix in front: qubit j gets
/// U3(pi/2, -pi/2, 0) for 'd' or U3(pi/2, +pi/2, 0) for 'u', taking
/// |0...0> to the H0 eigenstate `bits`.
Circuit with_y_basis_preparation(const Circuit& c, std::uint32_t bits);

struct NoisyRunResult {
  RealVector occupations;      // unfolded, averaged over dressings; level order
  RealVector raw_occupations;  // before unfolding, averaged; level order
  RealMatrix per_dressing;     // dressings x 2^N unfolded occupations
  int dressings = 0;
};

/// Full measurement pipeline: for each dressing, evolve rho = |0><0| through
/// the circuit with channels attached after every CNOT, rotate into the
/// sigma_y product basis, apply the readout response, sample shots, unfold
/// with IBU, and relabel bitstrings to ascending-energy level indices.
/// Deterministic given the seed.
NoisyRunResult run_noisy(const Circuit& c, const RealVector& params,
                         const QuenchSystem& sys, const NoiseModel& noise,
                         const ReadoutModel& readout, const RCPolicy& policy,
                         std::uint64_t seed);

// Two-qubit helpers for twirl diagnostics. Index convention: bit 0 of the
// 4-dim index is the control, bit 1 the target; two_qubit_pauli(4*a + b)
// puts Pauli a on the control and Pauli b on the target (a, b in IXYZ order).
Matrix4 cnot_matrix4();
Matrix4 two_qubit_pauli(int index);

/// PTM R_ij = Tr(P_i E(P_j)) / 4 of a two-qubit channel given as a density
/// map. Diagonal (off-diagonal < 1e-10) iff E is a Pauli channel.
RealMatrix pauli_transfer_matrix(
    const std::function<Matrix4(const Matrix4&)>& channel);

}  // namespace quench
