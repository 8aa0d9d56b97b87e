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

#include "quench/noise.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "quench/parallel.hpp"

namespace quench {

namespace {

// Measurement rotation W^dag taking sigma_y eigenstates onto the
// computational basis: |down>_y -> |0>, |up>_y -> |1>.
Matrix2 y_measurement_rotation() {
  Matrix2 w;
  const double s = std::sqrt(0.5);
  const Complex i1 = imag_unit();
  w << s, i1 * s, s, -i1 * s;
  return w;
}

void conjugate_1q(Matrix& rho, const Matrix2& g, int q) {
  apply_1q_left(rho, g, q);
  apply_1q_right_adjoint(rho, g, q);
}

void conjugate_pauli_pair(Matrix& rho, int pa, int pb, int qa, int qb) {
  if (pa != 0) conjugate_1q(rho, pauli_matrix("IXYZ"[pa]), qa);
  if (pb != 0) conjugate_1q(rho, pauli_matrix("IXYZ"[pb]), qb);
}

// CNOT conjugates of the 16 two-qubit Paulis, with their +-1 signs; entry i
// gives CNOT P_i CNOT = sign * P_{index}.
struct PauliConjugate {
  int index;
  double sign;
};

const std::array<PauliConjugate, 16>& cnot_conjugation_table() {
  static const std::array<PauliConjugate, 16> table = [] {
    std::array<PauliConjugate, 16> t{};
    const Matrix4 cnot = cnot_matrix4();
    for (int i = 0; i < 16; ++i) {
      const Matrix4 conj = cnot * two_qubit_pauli(i) * cnot;
      bool found = false;
      for (int j = 0; j < 16 && !found; ++j) {
        for (double sign : {1.0, -1.0}) {
          if ((conj - sign * two_qubit_pauli(j)).cwiseAbs().maxCoeff() <
              1e-12) {
            t[i] = {j, sign};
            found = true;
            break;
          }
        }
      }
      if (!found) throw std::logic_error("CNOT Pauli conjugation failed");
    }
    return t;
  }();
  return table;
}

// 12-element spectator twirl set {P * R}.
Matrix2 spectator_element(int index) {
  const int p = index / 3;
  const int r = index % 3;
  Matrix2 rot = Matrix2::Identity();
  const double s = std::sqrt(0.5);
  const Complex i1 = imag_unit();
  if (r == 1) {
    rot = s * (Matrix2::Identity() - i1 * pauli_matrix('X'));
  } else if (r == 2) {
    rot = s * (Matrix2::Identity() - i1 * pauli_matrix('Z'));
  }
  return pauli_matrix("IXYZ"[p]) * rot;
}

void check_probability_vector(const RealVector& p, double sum_tol,
                              const char* what) {
  if (p.minCoeff() < -1e-9) {
    throw std::invalid_argument(std::string(what) + " has negative entries");
  }
  if (std::abs(p.sum() - 1.0) > sum_tol) {
    throw std::invalid_argument(std::string(what) + " does not sum to 1");
  }
}

}  // namespace

void NoiseChannel::validate() const {
  switch (kind) {
    case Kind::kTwoQubitDepolarizing:
    case Kind::kLocalDepolarizing:
      if (p < 0.0 || p > 1.0) {
        throw std::invalid_argument("depolarizing strength outside [0, 1]");
      }
      break;
    case Kind::kGlobalDepolarizing:
      if (f < 0.0 || f > 1.0) {
        throw std::invalid_argument("global depolarizing f outside [0, 1]");
      }
      if (placement != Placement::kGlobal) {
        throw std::invalid_argument("global depolarizing must be global");
      }
      break;
    case Kind::kPauli:
      if (pauli_probs.size() != 16) {
        throw std::invalid_argument("Pauli channel needs 16 probabilities");
      }
      check_probability_vector(pauli_probs, 1e-9, "Pauli channel");
      if (placement != Placement::kActivePair) {
        throw std::invalid_argument("Pauli channel acts on the active pair");
      }
      break;
    case Kind::kCoherentOverRotation:
      if (std::string("XYZ").find(axis0) == std::string::npos ||
          std::string("XYZ").find(axis1) == std::string::npos) {
        throw std::invalid_argument("over-rotation axes must be X, Y or Z");
      }
      if (placement != Placement::kActivePair) {
        throw std::invalid_argument("over-rotation acts on the active pair");
      }
      break;
  }
  if (kind == Kind::kTwoQubitDepolarizing &&
      placement != Placement::kActivePair) {
    throw std::invalid_argument(
        "two-qubit depolarizing acts on the active pair");
  }
}

NoiseModel default_noise_preset() {
  NoiseModel model;
  NoiseChannel two_q;
  two_q.kind = NoiseChannel::Kind::kTwoQubitDepolarizing;
  two_q.placement = NoiseChannel::Placement::kActivePair;
  two_q.p = 0.01;
  model.push_back(two_q);

  NoiseChannel local;
  local.kind = NoiseChannel::Kind::kLocalDepolarizing;
  local.placement = NoiseChannel::Placement::kSpectators;
  local.p = 0.003;
  model.push_back(local);

  NoiseChannel global;
  global.kind = NoiseChannel::Kind::kGlobalDepolarizing;
  global.placement = NoiseChannel::Placement::kGlobal;
  global.f = 0.998;
  model.push_back(global);
  return model;
}

void ReadoutModel::validate() const {
  if (eps0 < 0.0 || eps0 >= 0.5 || eps1 < 0.0 || eps1 >= 0.5) {
    throw std::invalid_argument("readout errors must lie in [0, 0.5)");
  }
  if (shots < 0) {
    throw std::invalid_argument("shot count must be >= 0");
  }
  if (ibu_iterations < 0) {
    throw std::invalid_argument("IBU iteration count must be >= 0");
  }
}

RealMatrix ReadoutModel::response_matrix(int n_qubits) const {
  validate();
  const int dim = 1 << n_qubits;
  // Per-qubit confusion, R1[measured][true].
  Eigen::Matrix2d r1;
  r1 << 1.0 - eps0, eps1, eps0, 1.0 - eps1;
  RealMatrix r(dim, dim);
  for (int m = 0; m < dim; ++m) {
    for (int t = 0; t < dim; ++t) {
      double v = 1.0;
      for (int q = 0; q < n_qubits; ++q) {
        v *= r1((m >> q) & 1, (t >> q) & 1);
      }
      r(m, t) = v;
    }
  }
  return r;
}

void RCPolicy::validate() const {
  if (samples < 0) {
    throw std::invalid_argument("RC sample count must be >= 0");
  }
}

void apply_gate_density(Matrix& rho, const Gate& g, const RealVector& params) {
  if (g.kind == GateKind::kCnot) {
    apply_cnot_left(rho, g.q0, g.q1);
    apply_cnot_right(rho, g.q0, g.q1);
  } else {
    const Matrix2 u = gate_matrix_1q(g, params);
    apply_1q_left(rho, u, g.q0);
    apply_1q_right_adjoint(rho, u, g.q0);
  }
}

void apply_two_qubit_gate_density(Matrix& rho, const Matrix4& g, int q_bit0,
                                  int q_bit1) {
  const Eigen::Index dim = rho.rows();
  const Eigen::Index b0 = Eigen::Index(1) << q_bit0;
  const Eigen::Index b1 = Eigen::Index(1) << q_bit1;
  const auto mix = [&](bool rows) {
    for (Eigen::Index base = 0; base < dim; ++base) {
      if (base & (b0 | b1)) continue;
      const Eigen::Index idx[4] = {base, base | b0, base | b1,
                                   base | b0 | b1};
      for (Eigen::Index k = 0; k < dim; ++k) {
        Complex v[4];
        for (int i = 0; i < 4; ++i) {
          v[i] = rows ? rho(idx[i], k) : rho(k, idx[i]);
        }
        for (int i = 0; i < 4; ++i) {
          Complex acc(0.0, 0.0);
          for (int j = 0; j < 4; ++j) {
            acc += (rows ? g(i, j) : std::conj(g(i, j))) * v[j];
          }
          if (rows) {
            rho(idx[i], k) = acc;
          } else {
            rho(k, idx[i]) = acc;
          }
        }
      }
    }
  };
  mix(true);   // rho <- (g x I) rho
  mix(false);  // rho <- rho (g x I)^dag
}

void apply_local_depolarizing(Matrix& rho, double p, int qubit) {
  if (p == 0.0) return;
  Matrix acc = (1.0 - 0.75 * p) * rho;
  for (char c : {'X', 'Y', 'Z'}) {
    Matrix t = rho;
    conjugate_1q(t, pauli_matrix(c), qubit);
    acc += 0.25 * p * t;
  }
  rho = std::move(acc);
}

void apply_two_qubit_depolarizing(Matrix& rho, double p, int qa, int qb) {
  if (p == 0.0) return;
  Matrix acc = (1.0 - 15.0 * p / 16.0) * rho;
  for (int i = 1; i < 16; ++i) {
    Matrix t = rho;
    conjugate_pauli_pair(t, i / 4, i % 4, qa, qb);
    acc += (p / 16.0) * t;
  }
  rho = std::move(acc);
}

void apply_global_depolarizing(Matrix& rho, double f) {
  const Eigen::Index dim = rho.rows();
  const Complex trace = rho.trace();
  rho *= f;
  const Complex fill = (1.0 - f) * trace / static_cast<double>(dim);
  for (Eigen::Index i = 0; i < dim; ++i) rho(i, i) += fill;
}

void apply_pauli_channel(Matrix& rho, const RealVector& probs, int q_control,
                         int q_target) {
  if (probs.size() != 16) {
    throw std::invalid_argument("Pauli channel needs 16 probabilities");
  }
  Matrix acc = probs(0) * rho;
  for (int i = 1; i < 16; ++i) {
    if (probs(i) == 0.0) continue;
    Matrix t = rho;
    conjugate_pauli_pair(t, i / 4, i % 4, q_control, q_target);
    acc += probs(i) * t;
  }
  rho = std::move(acc);
}

void apply_coherent_over_rotation(Matrix& rho, double angle, char axis0,
                                  char axis1, int q0, int q1) {
  if (angle == 0.0) return;
  const Matrix2 pa = pauli_matrix(axis0);
  const Matrix2 pb = pauli_matrix(axis1);
  Matrix4 a;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      a(i, j) = pb((i >> 1) & 1, (j >> 1) & 1) * pa(i & 1, j & 1);
    }
  }
  const Matrix4 u = std::cos(0.5 * angle) * Matrix4::Identity() -
                    imag_unit() * std::sin(0.5 * angle) * a;
  apply_two_qubit_gate_density(rho, u, q0, q1);
}

void apply_channel_for_cnot(Matrix& rho, const NoiseChannel& ch, int control,
                            int target, int n_qubits) {
  switch (ch.kind) {
    case NoiseChannel::Kind::kTwoQubitDepolarizing:
      apply_two_qubit_depolarizing(rho, ch.p, control, target);
      return;
    case NoiseChannel::Kind::kLocalDepolarizing:
      if (ch.placement == NoiseChannel::Placement::kActivePair) {
        apply_local_depolarizing(rho, ch.p, control);
        apply_local_depolarizing(rho, ch.p, target);
      } else if (ch.placement == NoiseChannel::Placement::kSpectators) {
        for (int q = 0; q < n_qubits; ++q) {
          if (q != control && q != target) {
            apply_local_depolarizing(rho, ch.p, q);
          }
        }
      } else {
        for (int q = 0; q < n_qubits; ++q) {
          apply_local_depolarizing(rho, ch.p, q);
        }
      }
      return;
    case NoiseChannel::Kind::kGlobalDepolarizing:
      apply_global_depolarizing(rho, ch.f);
      return;
    case NoiseChannel::Kind::kPauli:
      apply_pauli_channel(rho, ch.pauli_probs, control, target);
      return;
    case NoiseChannel::Kind::kCoherentOverRotation:
      apply_coherent_over_rotation(rho, ch.angle, ch.axis0, ch.axis1, control,
                                   target);
      return;
  }
  throw std::invalid_argument("unknown noise channel kind");
}

void check_density(const Matrix& rho) {
  if (rho.rows() != rho.cols()) {
    throw NumericalError("density matrix is not square");
  }
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw NumericalError("density matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - Complex(1.0, 0.0)) > 1e-10) {
    throw NumericalError("density matrix trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-9) {
    throw NumericalError("density matrix has a negative eigenvalue");
  }
}

Circuit rc_dress(const Circuit& c, const RCPolicy& policy,
                 std::uint64_t seed) {
  c.validate();
  policy.validate();
  CounterRng rng(seed);
  Circuit out = c;
  out.gates.clear();
  out.gates.reserve(c.gates.size() * 4);
  Complex phase = c.global_phase;

  for (const Gate& g : c.gates) {
    if (g.kind != GateKind::kCnot) {
      out.gates.push_back(g);
      continue;
    }
    std::vector<Gate> before;
    std::vector<Gate> after;
    if (policy.twirl_active) {
      const int ai = static_cast<int>(rng.uniform_int(16));
      if (ai != 0) {
        before.push_back(Gate::pauli_gate(g.q0, "IXYZ"[ai / 4]));
        before.push_back(Gate::pauli_gate(g.q1, "IXYZ"[ai % 4]));
        const PauliConjugate pc = cnot_conjugation_table()[ai];
        if (pc.index / 4 != 0) {
          after.push_back(Gate::pauli_gate(g.q0, "IXYZ"[pc.index / 4]));
        }
        if (pc.index % 4 != 0) {
          after.push_back(Gate::pauli_gate(g.q1, "IXYZ"[pc.index % 4]));
        }
        phase *= pc.sign;
      }
    }
    if (policy.twirl_spectators) {
      for (int q = 0; q < c.n_qubits; ++q) {
        if (q == g.q0 || q == g.q1) continue;
        const int si = static_cast<int>(rng.uniform_int(12));
        if (si != 0) {
          const Matrix2 u = spectator_element(si);
          before.push_back(Gate::dress(q, u));
          after.push_back(Gate::dress(q, u.adjoint()));
        }
      }
    }
    out.gates.insert(out.gates.end(), before.begin(), before.end());
    out.gates.push_back(g);
    out.gates.insert(out.gates.end(), after.begin(), after.end());
  }
  out.global_phase = phase;
  return out;
}

RealVector multinomial_sample(const RealVector& probs, long shots,
                              CounterRng& rng) {
  if (shots < 1) {
    throw std::invalid_argument("multinomial sampling needs shots >= 1");
  }
  check_probability_vector(probs, 1e-6, "sampling distribution");
  const Eigen::Index dim = probs.size();
  RealVector cdf(dim);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    acc += std::max(0.0, probs(i));
    cdf(i) = acc;
  }
  RealVector counts = RealVector::Zero(dim);
  for (long s = 0; s < shots; ++s) {
    const double u = rng.uniform() * acc;
    Eigen::Index lo = 0;
    Eigen::Index hi = dim - 1;
    while (lo < hi) {
      const Eigen::Index mid = (lo + hi) / 2;
      if (u < cdf(mid)) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    counts(lo) += 1.0;
  }
  return counts / static_cast<double>(shots);
}

RealVector ibu_unfold(const RealVector& measured, const RealMatrix& response,
                      int iterations, const RealVector& prior) {
  const Eigen::Index dim = measured.size();
  if (response.rows() != dim || response.cols() != dim ||
      prior.size() != dim) {
    throw std::invalid_argument("IBU dimension mismatch");
  }
  check_probability_vector(measured, 1e-6, "measured distribution");
  check_probability_vector(prior, 1e-9, "IBU prior");
  for (Eigen::Index c = 0; c < dim; ++c) {
    if (std::abs(response.col(c).sum() - 1.0) > 1e-9 ||
        response.col(c).minCoeff() < -1e-12) {
      throw std::invalid_argument("response matrix is not column-stochastic");
    }
  }

  RealVector t = prior;
  for (int it = 0; it < iterations; ++it) {
    const RealVector rt = response * t;
    RealVector next(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      double sum = 0.0;
      for (Eigen::Index j = 0; j < dim; ++j) {
        if (rt(j) > 0.0) {
          sum += response(j, i) * measured(j) / rt(j);
        } else if (measured(j) > 0.0) {
          throw NumericalError(
              "IBU: response row has no support for a measured outcome");
        }
      }
      next(i) = t(i) * sum;
    }
    t = std::move(next);
  }
  return t;
}

Circuit with_y_basis_preparation(const Circuit& c, std::uint32_t bits) {
  Circuit out = c;
  std::vector<Gate> prefix;
  prefix.reserve(c.n_qubits);
  for (int q = 0; q < c.n_qubits; ++q) {
    const double phi = ((bits >> q) & 1) ? 0.5 * kPi : -0.5 * kPi;
    prefix.push_back(Gate::dress(q, u3_matrix(0.5 * kPi, phi, 0.0)));
  }
  out.gates.insert(out.gates.begin(), prefix.begin(), prefix.end());
  return out;
}

NoisyRunResult run_noisy(const Circuit& c, const RealVector& params,
                         const QuenchSystem& sys, const NoiseModel& noise,
                         const ReadoutModel& readout, const RCPolicy& policy,
                         std::uint64_t seed) {
  c.validate();
  sys.validate();
  readout.validate();
  policy.validate();
  for (const NoiseChannel& ch : noise) ch.validate();
  if (c.n_qubits != sys.n_qubits) {
    throw std::invalid_argument("circuit/system qubit count mismatch");
  }
  const int dim = sys.dim();
  const EnergyBasis basis = energy_basis(sys);
  const RealMatrix response = readout.response_matrix(sys.n_qubits);
  const RealVector prior = RealVector::Constant(dim, 1.0 / dim);
  const Matrix2 wdag = y_measurement_rotation();

  const bool dressing = policy.samples > 0;
  const int n_dress = dressing ? policy.samples : 1;
  const std::uint64_t stream = derive_seed(seed, kStreamNoisyRun);

  NoisyRunResult res;
  res.dressings = n_dress;
  res.per_dressing.resize(n_dress, dim);
  std::vector<RealVector> raw(n_dress);

  for (int s = 0; s < n_dress; ++s) {
    const std::uint64_t sdress = derive_seed(stream, s);
    const Circuit run_c =
        dressing ? rc_dress(c, policy, derive_seed(sdress, 0)) : c;

    Matrix rho = Matrix::Zero(dim, dim);
    rho(0, 0) = Complex(1.0, 0.0);
    for (const Gate& g : run_c.gates) {
      apply_gate_density(rho, g, params);
      if (g.kind == GateKind::kCnot) {
        for (const NoiseChannel& ch : noise) {
          apply_channel_for_cnot(rho, ch, g.q0, g.q1, sys.n_qubits);
        }
      }
    }
    for (int q = 0; q < sys.n_qubits; ++q) conjugate_1q(rho, wdag, q);

    RealVector p_true = rho.diagonal().real();
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (p_true(i) < 0.0) {
        if (p_true(i) < -1e-9) {
          throw NumericalError("negative measurement probability");
        }
        p_true(i) = 0.0;
      }
    }
    p_true /= p_true.sum();

    RealVector m = response * p_true;
    if (readout.shots > 0) {
      CounterRng srng(derive_seed(sdress, 1));
      m = multinomial_sample(m, readout.shots, srng);
    }
    const RealVector unfolded =
        ibu_unfold(m, response, readout.ibu_iterations, prior);

    RealVector occ(dim);
    RealVector raw_occ(dim);
    for (int b = 0; b < dim; ++b) {
      const int level = basis.index_of_label[b];
      occ(level) = unfolded(b);
      raw_occ(level) = m(b);
    }
    res.per_dressing.row(s) = occ.transpose();
    raw[s] = raw_occ;
  }

  std::vector<RealVector> rows(n_dress);
  for (int s = 0; s < n_dress; ++s) {
    rows[s] = res.per_dressing.row(s).transpose();
  }
  res.occupations = pairwise_sum(rows) / static_cast<double>(n_dress);
  res.raw_occupations = pairwise_sum(raw) / static_cast<double>(n_dress);
  return res;
}

Matrix4 cnot_matrix4() {
  Matrix4 m = Matrix4::Zero();
  m(0, 0) = 1.0;  // |c=0,t=0>
  m(2, 2) = 1.0;  // |c=0,t=1>
  m(3, 1) = 1.0;  // |c=1,t=0> -> |c=1,t=1>
  m(1, 3) = 1.0;
  return m;
}

Matrix4 two_qubit_pauli(int index) {
  if (index < 0 || index > 15) {
    throw std::invalid_argument("two-qubit Pauli index outside [0, 16)");
  }
  const Matrix2 pa = pauli_matrix("IXYZ"[index / 4]);  // control, bit 0
  const Matrix2 pb = pauli_matrix("IXYZ"[index % 4]);  // target, bit 1
  Matrix4 m;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      m(i, j) = pb((i >> 1) & 1, (j >> 1) & 1) * pa(i & 1, j & 1);
    }
  }
  return m;
}

RealMatrix pauli_transfer_matrix(
    const std::function<Matrix4(const Matrix4&)>& channel) {
  RealMatrix r(16, 16);
  for (int j = 0; j < 16; ++j) {
    const Matrix4 mapped = channel(two_qubit_pauli(j));
    for (int i = 0; i < 16; ++i) {
      const Complex v = (two_qubit_pauli(i) * mapped).trace() * 0.25;
      r(i, j) = v.real();
    }
  }
  return r;
}

}  // namespace quench
