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

#include "qutrit/linalg.hpp"
#include "qutrit/tomography.hpp"

namespace qutrit {
namespace {

void BM_StateMle(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const ReadoutModel r{};
  const auto an = tomography_analyzers().unitaries();
  const auto v = expected_voltages(linalg::random_density(rng, 3), an, r);
  StateMleOptions o;
  o.restarts = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mle_state(v, an, r, o));
}
BENCHMARK(BM_StateMle)->Arg(1)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_ProcessMle(benchmark::State& state) {
  std::mt19937_64 rng(5);
  const ReadoutModel r{};
  const auto an = tomography_analyzers().unitaries();
  const auto preps = state_preparations().unitaries();
  const OperatorBasis b = build_operator_basis();
  const CMatrix rho0 = thermal_state(r.thermal_p0).matrix();
  const RMatrix m = process_records(ideal_chi(UnitaryOperator(linalg::random_unitary(rng, 3)), b), preps, an, r, rho0);
  for (auto _ : state) benchmark::DoNotOptimize(process_mle(m, preps, an, r, b, rho0));
}
BENCHMARK(BM_ProcessMle)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace qutrit
