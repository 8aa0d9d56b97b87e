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

#include "quench/recompiler.hpp"
#include "test_support.hpp"

using namespace quench;

namespace {

RealVector random_params(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  RealVector p(n);
  for (int i = 0; i < n; ++i) p(i) = u(gen);
  return p;
}

/// Problem whose target lies exactly on the ansatz manifold.
RecompileProblem planted_problem(int layers, unsigned seed,
                                 RealVector* truth = nullptr) {
  const Circuit c = ansatz(4, layers);
  const RealVector p = random_params(c.n_params, seed);
  RecompileProblem prob;
  prob.circuit = c;
  prob.target = contract(c, p);
  if (truth) *truth = p;
  return prob;
}

}  // namespace

TEST_CASE("recompile_cost is the phase-invariant trace distance") {
  RealVector truth;
  RecompileProblem p = planted_problem(2, 501, &truth);

  CHECK(recompile_cost(truth, p) < 1e-14);

  // A global phase on the target leaves the cost at zero.
  p.target *= std::exp(Complex(0.0, 1.0) * 0.8);
  CHECK(recompile_cost(truth, p) < 1e-14);

  // Self-consistency against a direct trace evaluation.
  const RealVector other = random_params(p.circuit.n_params, 502);
  const Matrix v = contract(p.circuit, other);
  const double direct =
      1.0 - std::abs((v.adjoint() * p.target).trace()) / 16.0;
  CHECK(std::abs(recompile_cost(other, p) - direct) < 1e-12);
  CHECK(recompile_cost(other, p) >= 0.0);
  CHECK(recompile_cost(other, p) <= 1.0);

  // An unrelated random unitary sits far from the two-layer manifold.
  p.target = testsupport::random_unitary(16, 503);
  CHECK(recompile_cost(other, p) > 0.1);
}

TEST_CASE("RecompileProblem::validate rejects bad targets") {
  RecompileProblem p = planted_problem(1, 504);
  CHECK_NOTHROW(p.validate());

  p.target(0, 0) += Complex(0.3, 0.0);  // no longer unitary
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  p = planted_problem(1, 505);
  p.target = Matrix::Identity(8, 8);  // wrong dimension
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  p = planted_problem(1, 506);
  p.initial_params = RealVector::Zero(3);  // wrong arity
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("analytic gradient matches central differences") {
  const RecompileProblem p = planted_problem(2, 507);
  const auto cost = [&](const RealVector& x) { return recompile_cost(x, p); };

  for (unsigned k = 0; k < 20; ++k) {
    const RealVector x = random_params(p.circuit.n_params, 600 + k);
    const RealVector g = recompile_gradient(x, p);
    const RealVector fd = testsupport::fd_gradient(cost, x, 1e-6);
    const double scale = std::max(fd.cwiseAbs().maxCoeff(), 1e-12);
    CHECK((g - fd).cwiseAbs().maxCoeff() / scale < 1e-5);
  }

  // Combined call returns the same numbers.
  const RealVector x = random_params(p.circuit.n_params, 650);
  RealVector g;
  const double f = recompile_cost_grad(x, p, &g);
  CHECK(f == recompile_cost(x, p));
  CHECK((g - recompile_gradient(x, p)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(recompile_cost_grad(x, p, nullptr) == f);
}

TEST_CASE("lbfgs_recompile descends onto a planted solution") {
  RealVector truth;
  RecompileProblem p = planted_problem(2, 508, &truth);
  // Start inside the basin of the planted optimum.
  p.initial_params = truth + 0.05 * random_params(truth.size(), 509);
  p.options.cost_tolerance = 1e-12;
  p.options.max_iterations = 2000;

  const RecompileResult res = lbfgs_recompile(p);
  CHECK(res.cost < 1e-9);
  CHECK(res.fidelity > 1.0 - 1e-9);
  CHECK(res.total_iterations > 0);
  CHECK(res.total_evaluations >= res.total_iterations);
}

TEST_CASE("basin_hopping recovers an in-manifold target from scratch") {
  RecompileProblem p = planted_problem(1, 510);
  p.options.hops = 30;
  p.options.max_iterations = 1000;
  p.options.cost_tolerance = 1e-10;
  p.options.seed = 2;

  const RecompileResult res = basin_hopping(p);
  CHECK(res.cost < 1e-8);
  CHECK(res.fidelity >= 1.0 - 1e-8);
  CHECK(res.reached_tolerance);

  REQUIRE(!res.best_trace.empty());
  for (std::size_t k = 1; k < res.best_trace.size(); ++k) {
    CHECK(res.best_trace[k] <= res.best_trace[k - 1] + 1e-15);
  }
  CHECK(res.best_trace.back() == res.cost);
  CHECK(res.accepted_trace.size() == res.best_trace.size());
}

TEST_CASE("single zero-scale hop reduces to one L-BFGS descent") {
  RecompileProblem p = planted_problem(2, 511);
  p.initial_params = random_params(p.circuit.n_params, 512);
  p.options.hops = 1;
  p.options.hop_scale = 0.0;
  p.options.cost_tolerance = 1e-12;

  const RecompileResult hop = basin_hopping(p);
  const RecompileResult descent = lbfgs_recompile(p);
  CHECK(hop.cost == descent.cost);
  CHECK((hop.params - descent.params).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("empty initial parameters draw a reproducible start") {
  RecompileProblem p = planted_problem(1, 513);
  p.options.hops = 3;
  p.options.max_iterations = 200;
  p.options.cost_tolerance = 1e-10;
  p.options.seed = 77;

  const RecompileResult a = basin_hopping(p);
  const RecompileResult b = basin_hopping(p);
  CHECK(a.cost == b.cost);
  CHECK((a.params - b.params).cwiseAbs().maxCoeff() == 0.0);

  p.options.seed = 78;
  const RecompileResult c = basin_hopping(p);
  CHECK((a.params - c.params).cwiseAbs().maxCoeff() > 0.0);
}
