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

namespace quench {

/// U3(theta, phi, lambda) =
///   [[cos(theta/2),              -e^{i lambda} sin(theta/2)],
///    [e^{i phi} sin(theta/2),     e^{i(phi+lambda)} cos(theta/2)]].
Matrix2 u3_matrix(double theta, double phi, double lambda);
Matrix2 u3_dtheta(double theta, double phi, double lambda);
Matrix2 u3_dphi(double theta, double phi, double lambda);
Matrix2 u3_dlambda(double theta, double phi, double lambda);

/// Pauli matrix for p in {'I','X','Y','Z'}.
Matrix2 pauli_matrix(char p);

enum class GateKind {
  kU3,     // parameterized single-qubit gate, 3 params
  kCnot,   // control q0, target q1
  kPauli,  // fixed Pauli on q0
  kDress,  // fixed single-qubit unitary on q0 (twirling dressing)
};

struct Gate {
  GateKind kind = GateKind::kU3;
  int q0 = 0;           // single-qubit target, or CNOT control
  int q1 = 0;           // CNOT target
  int param_index = 0;  // base index of the (theta, phi, lambda) triple
  char pauli = 'I';     // kPauli label
  Matrix2 fixed = Matrix2::Identity();  // kDress matrix

  static Gate u3(int qubit, int param_index);
  static Gate cnot(int control, int target);
  static Gate pauli_gate(int qubit, char p);
  static Gate dress(int qubit, const Matrix2& u);
};

/// Ordered gate list; gates act on the state in list order (first gate acts
/// first). `global_phase` multiplies the contracted unitary; twirling uses
/// it to fold the sign of conjugated Paulis so dressed circuits stay exactly
/// equal to the bare one.
struct Circuit {
  int n_qubits = 0;
  int n_params = 0;
  std::vector<Gate> gates;
  Complex global_phase = Complex(1.0, 0.0);

  int cnot_count() const;
  void validate() const;  // throws std::invalid_argument
};

/// The recompilation ansatz: m layers, each consisting of CNOTs on the odd
/// bonds (1,2), (3,4), ... then the even bonds (2,3), (4,5), ..., then a U3
/// on every qubit. For N = 4 each layer holds 3 CNOTs and 12 parameters, so
/// m = 20 gives 60 CNOTs and n_p = 240.
Circuit ansatz(int n_qubits, int layers);

/// Dense contraction of the circuit at the given parameter values.
Matrix contract(const Circuit& c, const RealVector& params);

/// Replaces every CNOT by `factor` consecutive copies (factor odd), leaving
/// the ideal unitary unchanged and scaling the CNOT count.
Circuit fold_cnots(const Circuit& c, int factor);

/// The 2x2 matrix of a single-qubit gate (kU3/kPauli/kDress).
Matrix2 gate_matrix_1q(const Gate& g, const RealVector& params);

// In-place structured updates. apply_*_left computes m <- G m,
// apply_*_right_adjoint computes m <- m G^dagger; the CNOT is self-adjoint.
void apply_1q_left(Matrix& m, const Matrix2& g, int qubit);
void apply_1q_right_adjoint(Matrix& m, const Matrix2& g, int qubit);
void apply_cnot_left(Matrix& m, int control, int target);
void apply_cnot_right(Matrix& m, int control, int target);
void apply_1q_state(Vector& psi, const Matrix2& g, int qubit);
void apply_cnot_state(Vector& psi, int control, int target);

/// Line-oriented text form. When `params` is given its values are embedded
/// as `value` lines, so a recompiled circuit travels as one artifact.
std::string circuit_to_text(const Circuit& c,
                            const RealVector* params = nullptr);

/// Inverse of circuit_to_text. If the text carries `value` lines and
/// `params` is non-null, the vector is filled (missing values default 0).
/// Throws std::invalid_argument on malformed input.
Circuit circuit_from_text(const std::string& text,
                          RealVector* params = nullptr);

}  // namespace quench
