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

namespace qutrit {
namespace {

void BM_SearchWalshHadamard(benchmark::State& state) {
  const UnitaryOperator wh = walsh_hadamard();
  DecompositionSearchConfig o;
  o.grid_points = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(search_decompositions(wh, o));
}
BENCHMARK(BM_SearchWalshHadamard)->Arg(12)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace qutrit
