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

#include <functional>

#include "qutrit/linalg.hpp"

namespace qutrit::optimize {

using Objective = std::function<double(const RVector&)>;

struct NelderMeadOptions {
  double initial_step = 0.1;
  // Converged once the simplex fits in a box of this half-width...
  double x_tol = 1e-10;
  // ...or once the spread of objective values drops below this.
  double f_tol = 0.0;
  int max_evaluations = 50000;
  // Re-seed a fresh simplex around the incumbent this many times; each
  // restart shrinks the step by `restart_shrink`. Restarts stop early when
  // they no longer improve the objective.
  int restarts = 2;
  double restart_shrink = 0.1;
};

struct Minimum {
  RVector x;
  double value = 0.0;
  int evaluations = 0;
  int iterations = 0;
  bool converged = false;
};

/// Derivative-free simplex minimization with dimension-adaptive coefficients.
Minimum nelder_mead(const Objective& f, const RVector& x0, const NelderMeadOptions& options = {});

}  // namespace qutrit::optimize
