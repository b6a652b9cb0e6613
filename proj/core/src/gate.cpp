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

#include "qutrit/gate.hpp"

#include <cmath>
#include <complex>

namespace qutrit {

GateSchedule build_gate_schedule(const DeviceSpec& device, const GateDecomposition& d,
                                 const GateScheduleOptions& options) {
  device.validate();
  if (!(options.amplitude_scale >= 0.0)) throw ValidationError("amplitude scale must be >= 0");
  const PulseEnvelope shape{options.rise, options.flat, options.fall, 1.0};
  shape.validate();
  const double area1 = shape.area();
  const double area2 = shape.squared_area();
  if (!(area1 > 0.0)) throw ValidationError("gate envelope has zero area");

  GateSchedule out;
  out.decomposition = d;
  out.targets = pulse_area_targets(d, area1);
  const double total = shape.duration();

  auto single = [&](int j, int k, double rate, double phase) {
    const double g = device.drive_couplings(j, k);
    if (rate > 0.0 && g == 0.0) throw ModelValidityError("transition needed by the gate has zero drive coupling");
    const double amp = rate > 0.0 ? options.amplitude_scale * rate / std::abs(g) : 0.0;
    ToneSpec tone{amp, device.transition_freq(j, k), phase + (g < 0.0 ? kPi : 0.0), {j, k}, false};
    out.schedule.tones.push_back(make_tone(tone, options.rise, options.flat, options.fall));
  };

  single(0, 1, out.targets[0].rabi_rate, out.targets[0].phase);
  single(1, 2, out.targets[1].rabi_rate, out.targets[1].phase);

  const double m02 = std::abs(d.m02);
  if (device.drive_couplings(0, 2) != 0.0) {
    single(0, 2, out.targets[2].rabi_rate, out.targets[2].phase + options.phase02_offset);
  } else {
    out.two_photon_02 = true;
    const double rate = 2.0 * m02 / area2;
    out.targets[2].rabi_rate = rate;
    ToneSpec tone{1.0, 0.5 * device.transition_freq(0, 2), 0.0, {0, 2}, true};
    const double unit = two_photon_coupling(device, tone);
    if (rate > 0.0 && unit == 0.0)
      throw ModelValidityError("0-2 pair has neither a direct nor a two-photon coupling");
    tone.amplitude = rate > 0.0 ? options.amplitude_scale * std::sqrt(rate / std::abs(unit)) : 0.0;
    tone.phase = 0.5 * (out.targets[2].phase - (unit < 0.0 ? kPi : 0.0)) + options.phase02_offset;
    out.schedule.tones.push_back(make_tone(tone, options.rise, options.flat, options.fall));
  }
  out.schedule.total_duration = total;

  if (options.compensate) {
    out.shifts = tone_shift_reports(device, out.schedule, options.compensation);
    out.schedule = compensated_trajectories(device, out.schedule, options.compensation);
  }
  return out;
}

CMatrix ideal_gate(const GateDecomposition& d) { return d.reconstruct().matrix(); }

}  // namespace qutrit
