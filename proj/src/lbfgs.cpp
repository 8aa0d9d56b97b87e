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

#include "quench/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace quench {

namespace {

struct Evaluation {
  double alpha = 0.0;
  double f = 0.0;
  double slope = 0.0;  // directional derivative g . d
  RealVector x;
  RealVector g;
};

struct LineSearchOutcome {
  Evaluation point;
  bool ok = false;
  long evaluations = 0;
};

// Strong Wolfe line search (bracket then bisection zoom).
LineSearchOutcome wolfe_search(const Objective& fn, const RealVector& x0,
                               double f0, const RealVector& g0,
                               const RealVector& d,
                               const LbfgsOptions& opts) {
  LineSearchOutcome out;
  const double slope0 = g0.dot(d);
  if (!(slope0 < 0.0)) return out;  // not a descent direction

  const auto eval = [&](double alpha) {
    Evaluation e;
    e.alpha = alpha;
    e.x = x0 + alpha * d;
    e.g.resize(x0.size());
    e.f = fn(e.x, &e.g);
    e.slope = e.g.dot(d);
    ++out.evaluations;
    return e;
  };
  const auto wolfe_ok = [&](const Evaluation& e) {
    return e.f <= f0 + opts.wolfe_c1 * e.alpha * slope0 &&
           std::abs(e.slope) <= -opts.wolfe_c2 * slope0;
  };

  const double alpha_max = 1e4;
  Evaluation lo;  // lowest f seen that satisfies Armijo
  lo.alpha = 0.0;
  lo.f = f0;
  lo.slope = slope0;
  lo.x = x0;
  lo.g = g0;
  bool have_bracket = false;
  Evaluation hi;

  Evaluation prev = lo;
  double alpha = 1.0;
  for (int i = 0; i < opts.max_line_search_steps; ++i) {
    Evaluation cur = eval(alpha);
    if (cur.f > f0 + opts.wolfe_c1 * alpha * slope0 ||
        (i > 0 && cur.f >= prev.f)) {
      lo = prev;
      hi = cur;
      have_bracket = true;
      break;
    }
    if (wolfe_ok(cur)) {
      out.point = cur;
      out.ok = true;
      return out;
    }
    if (cur.slope >= 0.0) {
      lo = cur;
      hi = prev;
      have_bracket = true;
      break;
    }
    prev = cur;
    alpha = std::min(2.0 * alpha, alpha_max);
    if (alpha >= alpha_max) break;
  }
  if (!have_bracket) return out;

  // Zoom: lo satisfies Armijo with lo.slope*(hi.alpha - lo.alpha) < 0.
  for (int i = 0; i < opts.max_line_search_steps; ++i) {
    const double a = 0.5 * (lo.alpha + hi.alpha);
    Evaluation cur = eval(a);
    if (cur.f > f0 + opts.wolfe_c1 * a * slope0 || cur.f >= lo.f) {
      hi = cur;
    } else {
      if (wolfe_ok(cur)) {
        out.point = cur;
        out.ok = true;
        return out;
      }
      if (cur.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
      lo = cur;
    }
    if (std::abs(hi.alpha - lo.alpha) < 1e-14) break;
  }
  // No Wolfe point found; hand back the best Armijo point if it improves.
  if (lo.alpha > 0.0 && lo.f < f0) out.point = lo;
  return out;
}

}  // namespace

LbfgsResult lbfgs_minimize(const Objective& objective, const RealVector& x0,
                           const LbfgsOptions& options) {
  if (options.memory < 1) {
    throw std::invalid_argument("L-BFGS memory must be >= 1");
  }
  const Eigen::Index n = x0.size();
  LbfgsResult res;
  res.x = x0;
  res.gradient.resize(n);
  res.f = objective(res.x, &res.gradient);
  res.evaluations = 1;
  res.cost_trace.push_back(res.f);

  std::deque<RealVector> s_hist;
  std::deque<RealVector> y_hist;
  std::deque<double> rho_hist;

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (res.gradient.norm() < options.gradient_tolerance) {
      res.converged_gradient = true;
      break;
    }
    if (options.cost_tolerance >= 0.0 && res.f < options.cost_tolerance) {
      res.reached_cost_tolerance = true;
      break;
    }

    // Two-loop recursion for d = -H g.
    RealVector q = res.gradient;
    const int k = static_cast<int>(s_hist.size());
    std::vector<double> alpha(k);
    for (int i = k - 1; i >= 0; --i) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    if (k > 0) {
      const double gamma =
          s_hist[k - 1].dot(y_hist[k - 1]) / y_hist[k - 1].squaredNorm();
      q *= gamma;
    }
    for (int i = 0; i < k; ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(q);
      q += (alpha[i] - beta) * s_hist[i];
    }
    RealVector d = -q;
    if (!(d.dot(res.gradient) < 0.0)) {
      // Curvature history went stale; restart from steepest descent.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      d = -res.gradient;
    }

    const LineSearchOutcome ls =
        wolfe_search(objective, res.x, res.f, res.gradient, d, options);
    res.evaluations += ls.evaluations;
    if (!ls.ok) {
      if (ls.point.alpha > 0.0 && ls.point.f < res.f) {
        res.x = ls.point.x;
        res.f = ls.point.f;
        res.gradient = ls.point.g;
        res.cost_trace.push_back(res.f);
        ++res.iterations;
      }
      res.line_search_failed = true;
      break;
    }

    const RealVector s = ls.point.x - res.x;
    const RealVector y = ls.point.g - res.gradient;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > options.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    res.x = ls.point.x;
    res.f = ls.point.f;
    res.gradient = ls.point.g;
    res.cost_trace.push_back(res.f);
    ++res.iterations;
  }

  if (!res.converged_gradient && !res.line_search_failed &&
      options.cost_tolerance >= 0.0 && res.f < options.cost_tolerance) {
    res.reached_cost_tolerance = true;
  }
  return res;
}

}  // namespace quench
