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

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "qutrit/linalg.hpp"

namespace qutrit {

struct OdeOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double max_step = 0.0;      // 0: unlimited
  double initial_step = 0.0;  // 0: chosen from the tolerances
  std::size_t max_steps = 20'000'000;
};

struct OdeStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
};

using OdeRhs = std::function<void(double t, const CVector& y, CVector& dydt)>;
using OdeObserver = std::function<void(double t, const CVector& y)>;

/// Dormand-Prince 5(4) with local error control on the 2-norm of the state:
/// ||err|| <= abs_tol + rel_tol * ||y||. Integrates y from t0 to t1 in place,
/// landing exactly on every time in `samples` (sorted, inside [t0, t1]) and
/// reporting it to `observer`. Throws NumericalError on step-size underflow.
OdeStats integrate_dopri5(const OdeRhs& rhs, CVector& y, double t0, double t1, const std::vector<double>& samples,
                          const OdeObserver& observer, const OdeOptions& opts = {});

}  // namespace qutrit
