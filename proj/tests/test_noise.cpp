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
#include <random>

#include <doctest.h>

#include "quench/evolution.hpp"
#include "quench/noise.hpp"
#include "test_support.hpp"

using namespace quench;
using testsupport::embed_1q;
using testsupport::embed_cnot;
using testsupport::random_density;
using testsupport::total_variation;

namespace {

RealVector random_params(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  RealVector p(n);
  for (int i = 0; i < n; ++i) p(i) = u(gen);
  return p;
}

/// Coherent ZZ over-rotation on a two-qubit density matrix, built without
/// the library channel code.
Matrix4 zz_rotation(double angle) {
  Matrix4 u = Matrix4::Zero();
  // Z x Z eigenvalue (+1 on 00/11, -1 on 01/10), index bit 0 = control.
  for (int i = 0; i < 4; ++i) {
    const double sign = ((i == 0) || (i == 3)) ? 1.0 : -1.0;
    u(i, i) = std::exp(Complex(0.0, -0.5 * angle * sign));
  }
  return u;
}

}  // namespace

TEST_CASE("apply_gate_density conjugates by the circuit unitary") {
  const Circuit c = ansatz(3, 2);
  const RealVector p = random_params(c.n_params, 701);
  const Matrix u = contract(c, p);
  const Matrix rho0 = random_density(8, 702);

  Matrix rho = rho0;
  for (const Gate& g : c.gates) apply_gate_density(rho, g, p);
  CHECK((rho - u * rho0 * u.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_NOTHROW(check_density(rho));
}

TEST_CASE("apply_two_qubit_gate_density respects the bit convention") {
  const Matrix rho0 = random_density(8, 703);
  const Matrix4 g = zz_rotation(0.37);

  Matrix rho = rho0;
  apply_two_qubit_gate_density(rho, g, 2, 0);  // bit0 -> qubit 2, bit1 -> 0
  // Dense reference: diagonal phases on qubits 2 (low index bit) and 0.
  Matrix dense = Matrix::Zero(8, 8);
  for (int b = 0; b < 8; ++b) {
    const int i = ((b >> 2) & 1) | (((b >> 0) & 1) << 1);
    dense(b, b) = g(i, i);
  }
  CHECK((rho - dense * rho0 * dense.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("depolarizing channels preserve trace and fix the maximally mixed"
          " state") {
  Matrix rho = random_density(4, 704);
  apply_local_depolarizing(rho, 0.3, 1);
  CHECK(std::abs(rho.trace().real() - 1.0) < 1e-13);
  CHECK_NOTHROW(check_density(rho));

  Matrix mixed = Matrix::Identity(4, 4) / 4.0;
  Matrix mixed2 = mixed;
  apply_local_depolarizing(mixed2, 0.7, 0);
  apply_two_qubit_depolarizing(mixed2, 0.5, 0, 1);
  apply_global_depolarizing(mixed2, 0.9);
  CHECK((mixed2 - mixed).cwiseAbs().maxCoeff() < 1e-14);

  // Full two-qubit depolarizing wipes a pure state to I/4.
  Matrix pure = Matrix::Zero(4, 4);
  pure(0, 0) = 1.0;
  apply_two_qubit_depolarizing(pure, 1.0, 0, 1);
  CHECK((pure - mixed).cwiseAbs().maxCoeff() < 1e-14);

  // p = 0 and f = 1 are no-ops.
  Matrix rho2 = random_density(4, 705);
  Matrix rho3 = rho2;
  apply_local_depolarizing(rho3, 0.0, 0);
  apply_two_qubit_depolarizing(rho3, 0.0, 0, 1);
  apply_global_depolarizing(rho3, 1.0);
  CHECK((rho3 - rho2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("global depolarizing composes multiplicatively") {
  const Matrix rho0 = random_density(8, 706);
  Matrix a = rho0;
  apply_global_depolarizing(a, 0.95);
  apply_global_depolarizing(a, 0.85);
  Matrix b = rho0;
  apply_global_depolarizing(b, 0.95 * 0.85);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("Pauli channel reduces to known limits") {
  const Matrix rho0 = random_density(4, 707);

  RealVector identity_only = RealVector::Zero(16);
  identity_only(0) = 1.0;
  Matrix rho = rho0;
  apply_pauli_channel(rho, identity_only, 0, 1);
  CHECK((rho - rho0).cwiseAbs().maxCoeff() < 1e-15);

  // The uniform Pauli channel is completely depolarizing on the pair.
  RealVector uniform = RealVector::Constant(16, 1.0 / 16.0);
  rho = rho0;
  apply_pauli_channel(rho, uniform, 0, 1);
  CHECK((rho - Matrix::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("coherent over-rotation matches its dense unitary") {
  const Matrix rho0 = random_density(4, 708);
  Matrix rho = rho0;
  apply_coherent_over_rotation(rho, 0.23, 'Z', 'Z', 0, 1);
  const Matrix4 u = zz_rotation(0.23);
  CHECK((rho - u * rho0 * u.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("NoiseChannel::validate screens parameters") {
  NoiseChannel ch;
  ch.kind = NoiseChannel::Kind::kTwoQubitDepolarizing;
  ch.placement = NoiseChannel::Placement::kActivePair;
  ch.p = 1.5;
  CHECK_THROWS_AS(ch.validate(), std::invalid_argument);
  ch.p = -0.1;
  CHECK_THROWS_AS(ch.validate(), std::invalid_argument);
  ch.p = 0.1;
  CHECK_NOTHROW(ch.validate());

  NoiseChannel g;
  g.kind = NoiseChannel::Kind::kGlobalDepolarizing;
  g.f = 1.2;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);

  NoiseChannel pc;
  pc.kind = NoiseChannel::Kind::kPauli;
  pc.placement = NoiseChannel::Placement::kActivePair;
  pc.pauli_probs = RealVector::Constant(15, 1.0 / 15.0);
  CHECK_THROWS_AS(pc.validate(), std::invalid_argument);

  NoiseChannel co;
  co.kind = NoiseChannel::Kind::kCoherentOverRotation;
  co.placement = NoiseChannel::Placement::kActivePair;
  co.axis0 = 'Q';
  CHECK_THROWS_AS(co.validate(), std::invalid_argument);
}

TEST_CASE("check_density rejects broken density matrices") {
  CHECK_NOTHROW(check_density(random_density(4, 709)));

  Matrix nonherm = random_density(4, 710);
  nonherm(0, 1) += Complex(0.1, 0.0);
  CHECK_THROWS_AS(check_density(nonherm), NumericalError);

  Matrix offtrace = random_density(4, 711) * 1.5;
  CHECK_THROWS_AS(check_density(offtrace), NumericalError);

  Matrix negative = Matrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(check_density(negative), NumericalError);
}

TEST_CASE("two-qubit helper matrices follow the control-is-bit-0 layout") {
  CHECK((cnot_matrix4() - Matrix4(embed_cnot(0, 1, 2))).cwiseAbs().maxCoeff() ==
        0.0);

  const char paulis[4] = {'I', 'X', 'Y', 'Z'};
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const Matrix4 m = two_qubit_pauli(4 * a + b);
      const Matrix ref = embed_1q(pauli_matrix(paulis[a]), 0, 2) *
                         embed_1q(pauli_matrix(paulis[b]), 1, 2);
      CHECK((m - Matrix4(ref)).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("pauli_transfer_matrix flags coherent errors until twirled") {
  const auto identity_channel = [](const Matrix4& rho) { return rho; };
  const RealMatrix ptm_id = pauli_transfer_matrix(identity_channel);
  CHECK((ptm_id - RealMatrix::Identity(16, 16)).cwiseAbs().maxCoeff() <
        1e-12);

  // Bare coherent ZZ rotation: visibly non-Pauli.
  const Matrix4 zz = zz_rotation(0.1);
  const auto coherent = [&](const Matrix4& rho) -> Matrix4 {
    return zz * rho * zz.adjoint();
  };
  const RealMatrix ptm_raw = pauli_transfer_matrix(coherent);
  double raw_off = 0.0;
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      if (i != j) raw_off = std::max(raw_off, std::abs(ptm_raw(i, j)));
    }
  }
  CHECK(raw_off > 1e-3);

  // Exhaustive 16-element twirl: the error channel becomes Pauli-diagonal.
  const auto twirled = [&](const Matrix4& rho) -> Matrix4 {
    Matrix4 acc = Matrix4::Zero();
    for (int k = 0; k < 16; ++k) {
      const Matrix4 pk = two_qubit_pauli(k);
      acc += pk * (zz * (pk * rho * pk.adjoint()) * zz.adjoint()) *
             pk.adjoint();
    }
    return acc / 16.0;
  };
  const RealMatrix ptm_tw = pauli_transfer_matrix(twirled);
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      if (i != j) CHECK(std::abs(ptm_tw(i, j)) < 1e-10);
    }
  }
}

TEST_CASE("rc_dress leaves the contracted unitary exactly in place") {
  const Circuit c = ansatz(4, 3);
  const RealVector p = random_params(c.n_params, 712);
  const Matrix bare = contract(c, p);

  RCPolicy policy;
  for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
    const Circuit dressed = rc_dress(c, policy, seed);
    CHECK(dressed.cnot_count() == c.cnot_count());
    CHECK(dressed.gates.size() > c.gates.size());
    CHECK((contract(dressed, p) - bare).cwiseAbs().maxCoeff() < 1e-10);
  }

  // Spectator-only twirl is still an exact identity on the contraction.
  RCPolicy spectators_only;
  spectators_only.twirl_active = false;
  const Circuit sp = rc_dress(c, spectators_only, 5);
  CHECK((contract(sp, p) - bare).cwiseAbs().maxCoeff() < 1e-10);

  RCPolicy bad;
  bad.samples = -1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("readout response matrix is the column-stochastic tensor product") {
  ReadoutModel model;
  model.eps0 = 0.01;
  model.eps1 = 0.02;

  const RealMatrix r1 = model.response_matrix(1);
  CHECK(r1(0, 0) == doctest::Approx(0.99).epsilon(1e-15));
  CHECK(r1(1, 0) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(r1(0, 1) == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(r1(1, 1) == doctest::Approx(0.98).epsilon(1e-15));

  const RealMatrix r4 = model.response_matrix(4);
  for (int t = 0; t < 16; ++t) {
    CHECK(std::abs(r4.col(t).sum() - 1.0) < 1e-12);
  }
  // Tensor structure: a two-bit flip costs the product of the single flips.
  CHECK(std::abs(r4(0b0011, 0b0000) - 0.01 * 0.01 * 0.99 * 0.99) < 1e-15);
  CHECK(std::abs(r4(0b0000, 0b0001) - 0.02 * 0.99 * 0.99 * 0.99) < 1e-15);

  ReadoutModel bad;
  bad.eps0 = 0.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ReadoutModel{};
  bad.shots = -1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("multinomial_sample returns normalized frequencies") {
  RealVector p(4);
  p << 0.5, 0.25, 0.25, 0.0;

  CounterRng rng(71);
  const RealVector f = multinomial_sample(p, 100000, rng);
  CHECK(std::abs(f.sum() - 1.0) < 1e-12);
  CHECK(f(3) == 0.0);  // zero-probability bin never fires
  CHECK(std::abs(f(0) - 0.5) < 0.01);
  CHECK(std::abs(f(1) - 0.25) < 0.01);

  CounterRng r1(5), r2(5);
  CHECK((multinomial_sample(p, 500, r1) - multinomial_sample(p, 500, r2))
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("ibu_unfold inverts the response at infinite statistics") {
  ReadoutModel model;
  model.eps0 = 0.01;
  model.eps1 = 0.02;
  const RealMatrix r = model.response_matrix(4);

  RealVector truth(16);
  for (int i = 0; i < 16; ++i) truth(i) = 1.0 + ((i * 7) % 5);
  truth /= truth.sum();

  const RealVector measured = r * truth;
  const RealVector prior = RealVector::Constant(16, 1.0 / 16.0);
  const RealVector unfolded = ibu_unfold(measured, r, 10, prior);

  CHECK(std::abs(unfolded.sum() - 1.0) < 1e-12);
  CHECK(unfolded.minCoeff() >= 0.0);
  CHECK(total_variation(unfolded, truth) <= 1e-3);

  // Zero iterations return the prior untouched.
  const RealVector zero_it = ibu_unfold(measured, r, 0, prior);
  CHECK((zero_it - prior).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ibu_unfold raises when the model cannot explain a count") {
  RealMatrix r = RealMatrix::Zero(2, 2);
  r(0, 0) = 1.0;
  r(0, 1) = 1.0;  // measured bin 1 unreachable
  RealVector m(2);
  m << 0.25, 0.75;
  const RealVector prior = RealVector::Constant(2, 0.5);
  CHECK_THROWS_AS(ibu_unfold(m, r, 5, prior), NumericalError);
}

TEST_CASE("y-basis preparation places the register on an H0 eigenstate") {
  const QuenchSystem sys = paper_system();
  const EnergyBasis basis = energy_basis(sys);
  Circuit empty;
  empty.n_qubits = 4;
  empty.n_params = 0;

  for (std::uint32_t bits : {0b0000u, 0b1111u, 0b0110u}) {
    const Circuit prep = with_y_basis_preparation(empty, bits);
    const Matrix u = contract(prep, RealVector());
    const Vector psi = u.col(0);
    const RealVector occ = occupations(basis, psi);
    const int level = basis.index_of_label[bits];
    CHECK(std::abs(occ(level) - 1.0) < 1e-12);
  }
}

TEST_CASE("default_noise_preset matches its documentation") {
  const NoiseModel preset = default_noise_preset();
  REQUIRE(preset.size() == 3);
  CHECK(preset[0].kind == NoiseChannel::Kind::kTwoQubitDepolarizing);
  CHECK(preset[0].placement == NoiseChannel::Placement::kActivePair);
  CHECK(preset[0].p == 0.01);
  CHECK(preset[1].kind == NoiseChannel::Kind::kLocalDepolarizing);
  CHECK(preset[1].placement == NoiseChannel::Placement::kSpectators);
  CHECK(preset[1].p == 0.003);
  CHECK(preset[2].kind == NoiseChannel::Kind::kGlobalDepolarizing);
  CHECK(preset[2].f == 0.998);
  for (const NoiseChannel& ch : preset) CHECK_NOTHROW(ch.validate());
}

TEST_CASE("run_noisy with everything switched off reproduces the exact"
          " state") {
  const QuenchSystem sys = paper_system();
  const EnergyBasis basis = energy_basis(sys);
  const std::uint32_t bits = 0b0000;

  const Circuit body = ansatz(4, 2);
  const RealVector p = random_params(body.n_params, 713);
  const Circuit c = with_y_basis_preparation(body, bits);

  const Vector psi = contract(c, p).col(0);
  const RealVector ideal = occupations(basis, psi);

  NoiseModel no_noise;
  ReadoutModel perfect;
  perfect.eps0 = 0.0;
  perfect.eps1 = 0.0;
  perfect.shots = 0;
  RCPolicy bare;
  bare.samples = 0;

  const NoisyRunResult res =
      run_noisy(c, p, sys, no_noise, perfect, bare, 11);
  CHECK(res.dressings == 1);
  CHECK(res.per_dressing.rows() == 1);
  CHECK((res.occupations - ideal).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((res.raw_occupations - ideal).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("run_noisy is deterministic and dressing-aware") {
  const QuenchSystem sys = paper_system();
  const Circuit body = ansatz(4, 2);
  const RealVector p = random_params(body.n_params, 714);
  const Circuit c = with_y_basis_preparation(body, 0b0000);

  const NoiseModel noise = default_noise_preset();
  ReadoutModel readout;
  readout.shots = 200;
  RCPolicy policy;
  policy.samples = 4;

  const NoisyRunResult a = run_noisy(c, p, sys, noise, readout, policy, 31);
  const NoisyRunResult b = run_noisy(c, p, sys, noise, readout, policy, 31);
  CHECK(a.dressings == 4);
  CHECK(a.per_dressing.rows() == 4);
  CHECK((a.occupations - b.occupations).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.per_dressing - b.per_dressing).cwiseAbs().maxCoeff() == 0.0);

  const NoisyRunResult d = run_noisy(c, p, sys, noise, readout, policy, 32);
  CHECK((a.occupations - d.occupations).cwiseAbs().maxCoeff() > 0.0);

  CHECK(std::abs(a.occupations.sum() - 1.0) < 1e-9);
  CHECK(a.occupations.minCoeff() >= 0.0);
}
