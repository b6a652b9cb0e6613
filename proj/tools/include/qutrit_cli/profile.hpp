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

#include <iosfwd>
#include <string>

#include "qutrit/core.hpp"

namespace qutrit::cli {

/// Device profile: INI sections
///   [levels]      transitions_ghz = f01, f12, ...   (omega / 2pi, GHz)
///   [couplings]   scale_mhz = g (2pi MHz per unit amplitude); jk = relative strength
///   [decoherence] gamma_ij_khz (i -> j), dephasing_ij_khz (i < j), coherence_shape
///   [readout]     levels_mv = V0, V1, V2; noise_mv
///   [thermal]     p_th0
/// Unknown sections or keys are rejected.
DeviceSpec parse_profile(std::istream& in, const std::string& source = "<profile>");
DeviceSpec load_profile(const std::string& path);
void write_profile(std::ostream& out, const DeviceSpec& device);

}  // namespace qutrit::cli
