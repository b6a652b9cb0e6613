// Copyright 2026 The qutrit-wh Authors
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

#include "qutrit/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace qutrit::optimize {
namespace {

struct SimplexRun {
  RVector x;
  double value;
  int evaluations;
  int iterations;
  bool converged;
};

SimplexRun run_simplex(const Objective& f, const RVector& x0, double step, const NelderMeadOptions& opt,
                       int budget) {
  const Eigen::Index n = x0.size();
  const double dn = static_cast<double>(n);
  const double alpha = 1.0;
  const double beta = 1.0 + 2.0 / dn;
  const double gamma = 0.75 - 1.0 / (2.0 * dn);
  const double delta = 1.0 - 1.0 / dn;

  std::vector<RVector> pts(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> vals(static_cast<std::size_t>(n + 1));
  for (Eigen::Index i = 0; i < n; ++i) pts[static_cast<std::size_t>(i + 1)](i) += step;
  int evals = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    vals[i] = f(pts[i]);
    ++evals;
  }
  std::vector<std::size_t> order(pts.size());
  int iter = 0;
  bool converged = false;
  while (evals < budget) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];

    double size = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      size = std::max(size, (pts[i] - pts[best]).cwiseAbs().maxCoeff());
    if (size <= opt.x_tol || (opt.f_tol > 0.0 && vals[worst] - vals[best] <= opt.f_tol)) {
      converged = true;
      break;
    }
    ++iter;

    RVector centroid = RVector::Zero(n);
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (i != worst) centroid += pts[i];
    centroid /= dn;

    const RVector xr = centroid + alpha * (centroid - pts[worst]);
    const double fr = f(xr);
    ++evals;
    if (fr < vals[best]) {
      const RVector xe = centroid + beta * (xr - centroid);
      const double fe = f(xe);
      ++evals;
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const RVector xc = outside ? RVector(centroid + gamma * (xr - centroid))
                               : RVector(centroid - gamma * (centroid - pts[worst]));
    const double fc = f(xc);
    ++evals;
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + delta * (pts[i] - pts[best]);
      vals[i] = f(pts[i]);
      ++evals;
    }
  }
  const auto best_it = std::min_element(vals.begin(), vals.end());
  const std::size_t best = static_cast<std::size_t>(best_it - vals.begin());
  return {pts[best], vals[best], evals, iter, converged};
}

}  // namespace

Minimum nelder_mead(const Objective& f, const RVector& x0, const NelderMeadOptions& options) {
  Minimum out;
  SimplexRun run = run_simplex(f, x0, options.initial_step, options, options.max_evaluations);
  out.x = run.x;
  out.value = run.value;
  out.evaluations = run.evaluations;
  out.iterations = run.iterations;
  out.converged = run.converged;
  double step = options.initial_step;
  for (int r = 0; r < options.restarts && out.evaluations < options.max_evaluations; ++r) {
    step *= options.restart_shrink;
    if (step < options.x_tol) step = options.x_tol * 10.0;
    SimplexRun again = run_simplex(f, out.x, step, options, options.max_evaluations - out.evaluations);
    out.evaluations += again.evaluations;
    out.iterations += again.iterations;
    const bool improved = again.value < out.value;
    if (improved) {
      out.x = again.x;
      out.value = again.value;
    }
    out.converged = again.converged;
    if (!improved) break;
  }
  return out;
}

}  // namespace qutrit::optimize
