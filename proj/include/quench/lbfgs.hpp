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

#include <functional>
#include <vector>

#include "quench/common.hpp"

namespace quench {

/// Objective callback: returns f(x) and, when `grad` is non-null, fills the
/// gradient. Must be deterministic.
using Objective = std::function<double(const RealVector& x, RealVector* grad)>;

struct LbfgsOptions {
  int memory = 10;
  int max_iterations = 400;
  double gradient_tolerance = 1e-8;
  double cost_tolerance = -1.0;  // stop when f < this; negative disables
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  int max_line_search_steps = 30;
};

struct LbfgsResult {
  RealVector x;
  double f = 0.0;
  RealVector gradient;
  std::vector<double> cost_trace;  // f after each accepted iteration
  int iterations = 0;
  long evaluations = 0;
  bool converged_gradient = false;
  bool reached_cost_tolerance = false;
  bool line_search_failed = false;  // stopped early, best-so-far returned
};

/// Limited-memory BFGS with a strong-Wolfe line search. The accepted cost
/// sequence is non-increasing; on line-search failure the best point seen so
/// far is returned with the flag set.
LbfgsResult lbfgs_minimize(const Objective& objective, const RealVector& x0,
                           const LbfgsOptions& options);

}  // namespace quench
