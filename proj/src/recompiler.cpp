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

#include "quench/recompiler.hpp"

#include <cmath>
#include <stdexcept>

#include "quench/lbfgs.hpp"
#include "quench/rng.hpp"

namespace quench {

namespace {

// Frobenius inner product <A, B> = sum conj(A) .* B = Tr(A^dag B).
Complex frobenius(const Matrix& a, const Matrix& b) {
  return (a.conjugate().cwiseProduct(b)).sum();
}

Complex frobenius2(const Matrix2& a, const Matrix2& b) {
  return (a.conjugate().cwiseProduct(b)).sum();
}

// Partial trace of R over all qubits but `qubit`:
// W(a, b) = sum_rest R((a, rest), (b, rest)).
Matrix2 reduce_to_qubit(const Matrix& r, int qubit) {
  const Eigen::Index dim = r.rows();
  const Eigen::Index bit = Eigen::Index(1) << qubit;
  Matrix2 w = Matrix2::Zero();
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (i & bit) continue;
    w(0, 0) += r(i, i);
    w(0, 1) += r(i, i | bit);
    w(1, 0) += r(i | bit, i);
    w(1, 1) += r(i | bit, i | bit);
  }
  return w;
}

void apply_gate_left(Matrix& m, const Gate& g, const RealVector& params) {
  if (g.kind == GateKind::kCnot) {
    apply_cnot_left(m, g.q0, g.q1);
  } else {
    apply_1q_left(m, gate_matrix_1q(g, params), g.q0);
  }
}

void apply_gate_adjoint_left(Matrix& m, const Gate& g,
                             const RealVector& params) {
  if (g.kind == GateKind::kCnot) {
    apply_cnot_left(m, g.q0, g.q1);  // CNOT is self-adjoint
  } else {
    apply_1q_left(m, gate_matrix_1q(g, params).adjoint().eval(), g.q0);
  }
}

void apply_gate_right_adjoint(Matrix& m, const Gate& g,
                              const RealVector& params) {
  if (g.kind == GateKind::kCnot) {
    apply_cnot_right(m, g.q0, g.q1);
  } else {
    apply_1q_right_adjoint(m, gate_matrix_1q(g, params), g.q0);
  }
}

}  // namespace

void RecompileProblem::validate() const {
  circuit.validate();
  const Eigen::Index dim = Eigen::Index(1) << circuit.n_qubits;
  if (target.rows() != dim || target.cols() != dim) {
    throw std::invalid_argument("target dimension does not match circuit");
  }
  if ((target * target.adjoint() - Matrix::Identity(dim, dim))
          .cwiseAbs()
          .maxCoeff() > 1e-10) {
    throw std::invalid_argument("target matrix is not unitary");
  }
  if (initial_params.size() != 0 &&
      initial_params.size() != circuit.n_params) {
    throw std::invalid_argument("initial parameter vector length mismatch");
  }
  if (options.hops < 1) {
    throw std::invalid_argument("basin hopping needs at least one round");
  }
  if (options.hop_scale < 0.0 || options.metropolis_temperature < 0.0) {
    throw std::invalid_argument("negative hop scale or temperature");
  }
}

double recompile_cost(const RealVector& params, const RecompileProblem& p) {
  return recompile_cost_grad(params, p, nullptr);
}

RealVector recompile_gradient(const RealVector& params,
                              const RecompileProblem& p) {
  RealVector grad(params.size());
  recompile_cost_grad(params, p, &grad);
  return grad;
}

double recompile_cost_grad(const RealVector& params, const RecompileProblem& p,
                           RealVector* grad) {
  if (params.size() != p.circuit.n_params) {
    throw std::invalid_argument("parameter vector length mismatch");
  }
  const Eigen::Index dim = Eigen::Index(1) << p.circuit.n_qubits;
  const double norm = static_cast<double>(dim);
  const std::vector<Gate>& gates = p.circuit.gates;
  const Complex phase_conj = std::conj(p.circuit.global_phase);

  if (!grad) {
    const Matrix v = contract(p.circuit, params);
    const Complex t = frobenius(v, p.target);
    return std::max(0.0, 1.0 - std::abs(t) / norm);
  }

  grad->resize(params.size());
  grad->setZero();
  const int n_gates = static_cast<int>(gates.size());

  // r = Suf[k]^dag U Pref[k-1]^dag, started at k = 1 by peeling all gates
  // but the first off the left of U.
  Matrix r = p.target;
  for (int j = n_gates - 1; j >= 1; --j) {
    apply_gate_adjoint_left(r, gates[j], params);
  }

  // T = conj(phase) Tr(G_1^dag r).
  Complex t;
  {
    Matrix b = r;
    if (n_gates > 0) apply_gate_adjoint_left(b, gates[0], params);
    t = phase_conj * b.trace();
  }
  const double abs_t = std::abs(t);
  const double cost = std::max(0.0, 1.0 - abs_t / norm);
  if (abs_t < 1e-12) return cost;  // modulus kink; subgradient 0
  const Complex t_conj_unit = std::conj(t) / abs_t;

  for (int k = 0; k < n_gates; ++k) {
    const Gate& g = gates[k];
    if (g.kind == GateKind::kU3) {
      const Matrix2 w = reduce_to_qubit(r, g.q0);
      const double th = params(g.param_index);
      const double ph = params(g.param_index + 1);
      const double la = params(g.param_index + 2);
      const Matrix2 d_list[3] = {u3_dtheta(th, ph, la), u3_dphi(th, ph, la),
                                 u3_dlambda(th, ph, la)};
      for (int j = 0; j < 3; ++j) {
        // dT/dp = conj(phase) Tr(dG^dag r) = conj(phase) <dG, W>.
        const Complex dt = phase_conj * frobenius2(d_list[j], w);
        (*grad)(g.param_index + j) -= std::real(t_conj_unit * dt) / norm;
      }
    }
    if (k + 1 < n_gates) {
      // r_{k+1} = G_{k+1} r_k G_k^dag.
      apply_gate_left(r, gates[k + 1], params);
      apply_gate_right_adjoint(r, gates[k], params);
    }
  }
  return cost;
}

RecompileResult lbfgs_recompile(const RecompileProblem& p) {
  p.validate();
  RealVector x0 = p.initial_params;
  if (x0.size() == 0) {
    CounterRng rng(derive_seed(p.options.seed, kStreamRecompile));
    x0.resize(p.circuit.n_params);
    for (Eigen::Index i = 0; i < x0.size(); ++i) {
      x0(i) = rng.uniform(-kPi, kPi);
    }
  }

  LbfgsOptions opts;
  opts.memory = p.options.lbfgs_memory;
  opts.max_iterations = p.options.max_iterations;
  opts.gradient_tolerance = p.options.gradient_tolerance;
  opts.cost_tolerance = p.options.cost_tolerance;
  opts.wolfe_c1 = p.options.wolfe_c1;
  opts.wolfe_c2 = p.options.wolfe_c2;

  const Objective objective = [&p](const RealVector& x, RealVector* g) {
    return recompile_cost_grad(x, p, g);
  };
  const LbfgsResult inner = lbfgs_minimize(objective, x0, opts);

  RecompileResult res;
  res.params = inner.x;
  res.cost = inner.f;
  res.fidelity = 1.0 - inner.f;
  res.iteration_trace = inner.cost_trace;
  res.best_trace = {inner.f};
  res.accepted_trace = {inner.f};
  res.total_iterations = inner.iterations;
  res.total_evaluations = inner.evaluations;
  res.line_search_failed = inner.line_search_failed;
  res.reached_tolerance = inner.reached_cost_tolerance;
  return res;
}

RecompileResult basin_hopping(const RecompileProblem& p) {
  p.validate();
  CounterRng rng(derive_seed(p.options.seed, kStreamRecompile));

  RealVector x0 = p.initial_params;
  if (x0.size() == 0) {
    x0.resize(p.circuit.n_params);
    for (Eigen::Index i = 0; i < x0.size(); ++i) {
      x0(i) = rng.uniform(-kPi, kPi);
    }
  }

  LbfgsOptions opts;
  opts.memory = p.options.lbfgs_memory;
  opts.max_iterations = p.options.max_iterations;
  opts.gradient_tolerance = p.options.gradient_tolerance;
  opts.cost_tolerance = p.options.cost_tolerance;
  opts.wolfe_c1 = p.options.wolfe_c1;
  opts.wolfe_c2 = p.options.wolfe_c2;
  const Objective objective = [&p](const RealVector& x, RealVector* g) {
    return recompile_cost_grad(x, p, g);
  };

  RecompileResult res;
  RealVector x_accepted;
  double f_accepted = 0.0;
  double scale = p.options.hop_scale;
  int window_accepts = 0;
  int window_hops = 0;

  for (int hop = 0; hop < p.options.hops; ++hop) {
    RealVector start;
    if (hop == 0) {
      start = x0;
    } else {
      start = x_accepted;
      for (Eigen::Index i = 0; i < start.size(); ++i) {
        start(i) += scale * rng.gaussian();
      }
    }
    const LbfgsResult inner = lbfgs_minimize(objective, start, opts);
    res.total_iterations += inner.iterations;
    res.total_evaluations += inner.evaluations;
    res.line_search_failed = res.line_search_failed || inner.line_search_failed;
    res.iteration_trace.insert(res.iteration_trace.end(),
                               inner.cost_trace.begin(),
                               inner.cost_trace.end());

    bool accept = hop == 0 || inner.f < f_accepted;
    if (!accept && p.options.metropolis_temperature > 0.0) {
      const double u = rng.uniform();
      accept = u < std::exp(-(inner.f - f_accepted) /
                            p.options.metropolis_temperature);
    }
    if (accept) {
      x_accepted = inner.x;
      f_accepted = inner.f;
    }
    if (hop == 0 || inner.f < res.cost) {
      res.cost = inner.f;
      res.params = inner.x;
    }
    res.best_trace.push_back(res.cost);
    res.accepted_trace.push_back(f_accepted);
    if (res.cost < p.options.cost_tolerance) {
      res.reached_tolerance = true;
      break;
    }
    if (hop > 0) {
      window_accepts += accept ? 1 : 0;
      ++window_hops;
      if (p.options.adapt_interval > 0 &&
          window_hops >= p.options.adapt_interval) {
        // Aim for roughly half the proposals accepted: widen the jumps when
        // the chain accepts too easily, shrink them when it stalls.
        scale = 2 * window_accepts >= window_hops
                    ? std::min(scale * 1.1, kPi)
                    : std::max(scale * 0.9, 1e-2);
        window_accepts = 0;
        window_hops = 0;
      }
    }
  }
  res.fidelity = 1.0 - res.cost;
  return res;
}

}  // namespace quench
