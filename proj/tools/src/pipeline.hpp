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

#include <array>
#include <optional>
#include <string>

#include "qutrit/decomposer.hpp"
#include "qutrit/dynamics.hpp"
#include "qutrit/gate.hpp"

namespace CLI {
class App;
}

namespace qutrit::cli {

/// wh, walsh-hadamard, identity, or a 3x3 matrix file.
UnitaryOperator resolve_target(const std::string& target);

struct GateFlags {
  std::string gate = "wh";
  double rise_ns = 4.0;
  double flat_ns = 27.0;
  double fall_ns = 4.0;
  std::optional<double> duration_ns;
  bool no_decoherence = false;
  bool no_compensation = false;
  std::string shift_mode = "perturbative";
  double amplitude_scale = 1.0;
  double phase02_offset = 0.0;
  double rtol = 1e-9;
  double atol = 1e-11;
  double max_step_ns = 0.0;
  std::string initial = "thermal";
};

void add_gate_flags(CLI::App& sub, GateFlags& f);
std::string gate_config(const GateFlags& f);

struct GatePlan {
  GateDecomposition decomposition;
  PulseSchedule schedule;
  std::optional<std::array<double, 3>> virtual_phases;  // unset for the empty schedule
  CMatrix ideal;                                        // U_d U_o
  SimulationConfig config;
  std::optional<CMatrix> initial_state;  // unset: thermal
};

/// Decomposes the target and synthesizes the pulse. A zero total duration
/// yields the empty schedule, i.e. the identity process.
GatePlan plan_gate(const DeviceSpec& device, const GateFlags& f, double extra_phase02 = 0.0);

/// The state entering the gate for preparation `prep`.
CMatrix prepared_state(const DeviceSpec& device, const GatePlan& plan, const CMatrix& prep);

}  // namespace qutrit::cli
