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

#include "quench/evolution.hpp"
#include "quench/spin_hamiltonian.hpp"
#include "test_support.hpp"

using namespace quench;
using testsupport::expm_taylor;
using testsupport::random_hermitian;
using testsupport::random_state;

TEST_CASE("Propagator matches a scaling-and-squaring exponential") {
  const Matrix h = random_hermitian(16, 3001);
  const Propagator prop(h);
  for (double t : {0.0, 0.3, 1.7, 5.0}) {
    const Matrix u = prop.unitary(t);
    const Matrix ref = expm_taylor(Complex(0.0, -t) * h);
    CHECK((u - ref).cwiseAbs().maxCoeff() < 1e-11);
    CHECK((u * u.adjoint() - Matrix::Identity(16, 16)).cwiseAbs().maxCoeff() <
          1e-12);
  }
}

TEST_CASE("evolve agrees with the dense unitary") {
  const Matrix h = random_hermitian(8, 3002);
  const Propagator prop(h);
  const Vector psi0 = random_state(8, 3003);

  CHECK((prop.evolve(psi0, 0.0) - psi0).norm() < 1e-13);
  for (double t : {0.4, 2.2}) {
    const Vector a = prop.evolve(psi0, t);
    const Vector b = prop.unitary(t) * psi0;
    CHECK((a - b).norm() < 1e-12);
    CHECK(std::abs(a.norm() - 1.0) < 1e-12);
  }

  // Group property: evolving twice by t equals evolving once by 2t.
  const Vector two_steps = prop.evolve(prop.evolve(psi0, 0.7), 0.7);
  CHECK((two_steps - prop.evolve(psi0, 1.4)).norm() < 1e-12);
}

TEST_CASE("Propagator reproduces the input Hamiltonian") {
  const Matrix h = random_hermitian(8, 3004);
  const Propagator prop(h);
  const Matrix rebuilt = prop.eigenvectors() *
                         prop.eigenvalues().asDiagonal().toDenseMatrix()
                             .cast<Complex>() *
                         prop.eigenvectors().adjoint();
  CHECK((rebuilt - h).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("TimeGrid covers both ends with uniform steps") {
  TimeGrid g;  // defaults [0, 20] step 0.05
  const std::vector<double> pts = g.points();
  REQUIRE(pts.size() == 401);
  CHECK(pts.front() == 0.0);
  CHECK(pts.back() == 20.0);
  for (std::size_t k = 1; k < pts.size(); ++k) {
    CHECK(std::abs(pts[k] - pts[k - 1] - 0.05) < 1e-12);
  }

  TimeGrid quarter{0.0, 1.0, 0.25};
  const std::vector<double> q = quarter.points();
  REQUIRE(q.size() == 5);
  CHECK(q.back() == 1.0);
}

TEST_CASE("TimeGrid::validate rejects malformed grids") {
  TimeGrid g;
  g.dt = 0.0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = TimeGrid{};
  g.t_max = g.t_min;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = TimeGrid{};
  g.t_min = -1.0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("occupations form a probability vector over the levels") {
  const QuenchSystem sys = paper_system();
  const EnergyBasis basis = energy_basis(sys);

  for (int l : {0, 7, 15}) {
    const RealVector n = occupations(basis, basis.eigenvectors.col(l));
    CHECK(std::abs(n(l) - 1.0) < 1e-13);
    CHECK(std::abs(n.sum() - 1.0) < 1e-13);
  }

  const Vector psi = random_state(16, 3005);
  const RealVector n = occupations(basis, psi);
  CHECK(n.minCoeff() >= 0.0);
  CHECK(std::abs(n.sum() - 1.0) < 1e-12);
}

TEST_CASE("mean_energy and energy_variance match direct sums") {
  const QuenchSystem sys = paper_system();
  const EnergyBasis basis = energy_basis(sys);

  RealVector p = RealVector::Zero(16);
  p(0) = 0.5;
  p(15) = 0.5;  // symmetric mix of the extremes
  CHECK(std::abs(mean_energy(basis, p)) < 1e-14);
  CHECK(std::abs(energy_variance(basis, p) - 1.075 * 1.075) < 1e-12);

  const RealVector uniform = RealVector::Constant(16, 1.0 / 16.0);
  double e2 = 0.0;
  for (int l = 0; l < 16; ++l) {
    e2 += basis.energies(l) * basis.energies(l) / 16.0;
  }
  CHECK(std::abs(mean_energy(basis, uniform)) < 1e-14);
  CHECK(std::abs(energy_variance(basis, uniform) - e2) < 1e-13);
}
