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

#include <benchmark/benchmark.h>

#include "qutrit/decomposer.hpp"
#include "qutrit/dynamics.hpp"
#include "qutrit/gate.hpp"
#include "qutrit/tomography.hpp"

namespace qutrit {
namespace {

// One preparation through the compensated gate; range(0) toggles decoherence.
void BM_GateSimulation(benchmark::State& state) {
  const DeviceSpec d = paper_device();
  const GateDecomposition dec = select_decomposition(search_decompositions(walsh_hadamard()));
  const PulseSchedule s = build_gate_schedule(d, dec).schedule;
  const CMatrix prep = state_preparations().pulses[5].unitary();
  SimulationConfig cfg;
  cfg.include_decoherence = state.range(0) != 0;
  GateSequenceOptions o;
  o.virtual_phases = dec.phases;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_gate_sequence(d, prep, s, {}, cfg, o));
}
BENCHMARK(BM_GateSimulation)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace qutrit
