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
#include <vector>

#include "quench/circuit.hpp"
#include "quench/common.hpp"

namespace quench {

struct RecompileOptions {
  int lbfgs_memory = 10;
  int max_iterations = 4000;  // per basin; enough to converge a 240-dim basin
  double gradient_tolerance = 1e-8;
  double cost_tolerance = 1e-3;  // stop hopping once best cost is below
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  int hops = 50;                         // basin-hopping rounds K
  double hop_scale = 0.5;                // Gaussian perturbation, radians
  double metropolis_temperature = 5e-4;  // on cost
  // Retune hop_scale every `adapt_interval` hops toward ~50% Metropolis
  // acceptance; 0 disables the adaptation.
  int adapt_interval = 8;
  std::uint64_t seed = 1;
};

struct RecompileProblem {
  Matrix target;    // unitary to approximate
  Circuit circuit;  // ansatz
  RealVector initial_params;  // empty -> uniform [-pi, pi) from the seed
  RecompileOptions options;

  /// Throws std::invalid_argument on dimension mismatch or a non-unitary
  /// target (tolerance 1e-10).
  void validate() const;
};

struct RecompileResult {
  RealVector params;
  double cost = 1.0;       // C = 1 - |Tr(V^dag U)| / 2^N
  double fidelity = 0.0;   // 1 - cost
  std::vector<double> best_trace;      // best cost after each hop
  std::vector<double> accepted_trace;  // Metropolis-accepted cost per hop
  std::vector<double> iteration_trace; // inner L-BFGS accepted costs (concat)
  long total_iterations = 0;
  long total_evaluations = 0;
  bool line_search_failed = false;
  bool reached_tolerance = false;
};

/// C = 1 - |Tr(V(params)^dag target)| / 2^N, clamped into [0, 1]. Zero iff
/// the contraction matches the target up to a global phase.
double recompile_cost(const RealVector& params, const RecompileProblem& p);

/// Exact analytic gradient of recompile_cost, assembled from one backward
/// and one forward sweep of cached partial contractions (O(L 4^N) total).
/// Matches central finite differences to 1e-5 relative.
RealVector recompile_gradient(const RealVector& params,
                              const RecompileProblem& p);

/// Combined evaluation; `grad` may be null for a cost-only pass.
double recompile_cost_grad(const RealVector& params, const RecompileProblem& p,
                           RealVector* grad);

/// One L-BFGS descent from the problem's initial point (single basin).
RecompileResult lbfgs_recompile(const RecompileProblem& p);

/// Basin hopping: repeated Gaussian perturbation of the accepted point,
/// L-BFGS descent, Metropolis acceptance on cost, with the perturbation
/// scale retuned toward ~50% acceptance every adapt_interval hops. Returns
/// the best point over all hops; the best-cost trace is non-increasing.
/// K = 1 with zero perturbation reduces to lbfgs_recompile.
RecompileResult basin_hopping(const RecompileProblem& p);

}  // namespace quench
