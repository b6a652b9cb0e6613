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

#include "qutrit/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qutrit/errors.hpp"

namespace qutrit {
namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b_hat
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

OdeStats integrate_dopri5(const OdeRhs& rhs, CVector& y, double t0, double t1, const std::vector<double>& samples,
                          const OdeObserver& observer, const OdeOptions& opts) {
  if (!(opts.rel_tol > 0.0) || !(opts.abs_tol > 0.0)) throw ValidationError("integrator tolerances must be positive");
  if (!(t1 >= t0)) throw ValidationError("integration interval must run forward in time");
  if (!std::is_sorted(samples.begin(), samples.end())) throw ValidationError("sample times must be sorted");

  OdeStats stats;
  const Eigen::Index n = y.size();
  CVector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y_new(n), err(n);

  std::size_t next = 0;
  auto emit_until = [&](double t) {
    while (next < samples.size() && samples[next] <= t) {
      if (samples[next] >= t0 && observer) observer(samples[next], y);
      ++next;
    }
  };
  emit_until(t0);
  if (t1 == t0) return stats;

  double t = t0;
  rhs(t, y, k1);
  ++stats.evaluations;

  const double span = t1 - t0;
  double h = opts.initial_step;
  if (!(h > 0.0)) {
    const double scale = opts.abs_tol + opts.rel_tol * y.norm();
    const double d1 = k1.norm();
    h = d1 > 0.0 ? 0.01 * std::pow(scale / d1, 0.2) * std::max(1.0, std::pow(d1 / std::max(y.norm(), 1e-300), 0.8))
                 : 1e-3 * span;
    h = std::min(h, 1e-2 * span);
  }
  if (opts.max_step > 0.0) h = std::min(h, opts.max_step);

  while (t < t1) {
    if (stats.accepted + stats.rejected >= opts.max_steps) {
      std::ostringstream msg;
      msg << "integrator step budget exhausted at t = " << t << " s";
      throw NumericalError(msg.str());
    }
    double target = t1;
    if (next < samples.size() && samples[next] < t1) target = samples[next];
    bool lands = false;
    double step = h;
    if (t + step >= target) {
      step = target - t;
      lands = true;
    }
    const double min_step = 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), span);
    if (step < min_step && !lands) {
      std::ostringstream msg;
      msg << "integrator step size underflow at t = " << t << " s";
      throw NumericalError(msg.str());
    }

    tmp = y + step * (a21 * k1);
    rhs(t + c2 * step, tmp, k2);
    tmp = y + step * (a31 * k1 + a32 * k2);
    rhs(t + c3 * step, tmp, k3);
    tmp = y + step * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * step, tmp, k4);
    tmp = y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * step, tmp, k5);
    tmp = y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + step, tmp, k6);
    y_new = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(t + step, y_new, k7);
    stats.evaluations += 6;

    err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double scale = opts.abs_tol + opts.rel_tol * std::max(y.norm(), y_new.norm());
    const double ratio = err.norm() / scale;
    if (!std::isfinite(ratio)) {
      std::ostringstream msg;
      msg << "non-finite state at t = " << t << " s";
      throw NumericalError(msg.str());
    }

    const double factor = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
    if (ratio <= 1.0) {
      t = lands ? target : t + step;
      y.swap(y_new);
      k1.swap(k7);
      ++stats.accepted;
      emit_until(t);
      // A step shortened to land on a sample keeps the previous proposal.
      h = lands ? std::max(h, step * factor) : step * factor;
    } else {
      ++stats.rejected;
      h = step * factor;
      if (h < min_step) {
        std::ostringstream msg;
        msg << "integrator step size underflow at t = " << t << " s";
        throw NumericalError(msg.str());
      }
    }
    if (opts.max_step > 0.0) h = std::min(h, opts.max_step);
  }
  emit_until(t1);
  return stats;
}

}  // namespace qutrit
