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

#include <random>

#include <benchmark/benchmark.h>

#include "qutrit/core.hpp"
#include "qutrit/drive_model.hpp"
#include "qutrit/linalg.hpp"

namespace qutrit {
namespace {

void BM_ExpmSkew(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const Eigen::Index n = state.range(0);
  const CMatrix u = linalg::random_unitary(rng, n);
  const CMatrix h = 0.5 * (u + u.adjoint());
  for (auto _ : state) benchmark::DoNotOptimize(expm_skew(h, 0.7));
}
BENCHMARK(BM_ExpmSkew)->Arg(3)->Arg(9)->Arg(21);

void BM_DressedShifts(benchmark::State& state) {
  const DeviceSpec d = paper_device();
  const ToneSpec t{1.0, 0.5 * d.transition_freq(0, 2) - kTwoPi * 50e6, 0.0, {0, 2}, true};
  NumericShiftOptions o;
  o.blocks = static_cast<int>(state.range(0));
  o.anticrossing_gap = false;
  for (auto _ : state) benchmark::DoNotOptimize(numeric_shifts(d, t, o));
}
BENCHMARK(BM_DressedShifts)->Arg(5)->Arg(9)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace qutrit
