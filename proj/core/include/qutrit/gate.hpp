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
#include <vector>

#include "qutrit/decomposer.hpp"
#include "qutrit/drive_model.hpp"
#include "qutrit/pulse.hpp"

namespace qutrit {

struct GateScheduleOptions {
  double rise = 4e-9;
  double flat = 27e-9;
  double fall = 4e-9;
  bool compensate = true;
  CompensationOptions compensation;
  // Added to the 0-2 tone phase (the tone, not the effective coupling).
  double phase02_offset = 0.0;
  // Scales every tone amplitude; 1 is the calibrated gate.
  double amplitude_scale = 1.0;
};

struct GateSchedule {
  PulseSchedule schedule;
  GateDecomposition decomposition;
  // Flat-top Rabi rates and phases of the effective couplings, (0,1), (1,2), (0,2).
  std::array<TransitionTarget, 3> targets;
  std::vector<ShiftReport> shifts;  // per tone at full amplitude
  bool two_photon_02 = false;
};

/// Three simultaneous tones realizing exp(-i G_o). Single-photon tones get
/// flat-top Rabi rate 2|m| / (flat + (rise + fall)/2), the integrated
/// envelope. The 0-2 pair, when it has no direct coupling, is driven at half
/// its frequency with amplitude chosen so the two-photon rate, which follows
/// the squared envelope, integrates to 2|m_02|. Carrier and frame follow the
/// drive-induced shifts when `compensate` is set.
GateSchedule build_gate_schedule(const DeviceSpec& device, const GateDecomposition& d,
                                 const GateScheduleOptions& options = {});

/// The unitary the ideal gate applies, U_d U_o, in the qutrit frame.
CMatrix ideal_gate(const GateDecomposition& d);

}  // namespace qutrit
