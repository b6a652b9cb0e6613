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

#include <optional>
#include <utility>
#include <vector>

#include "qutrit/core.hpp"

namespace qutrit {

/// One drive tone. `amplitude` multiplies the device couplings g_jk, so the
/// Rabi rate on pair (j, k) is g_jk * amplitude. A two-photon tone targets a
/// pair at half its transition frequency.
struct ToneSpec {
  double amplitude = 0.0;     // dimensionless drive units
  double carrier_freq = 0.0;  // rad/s
  double phase = 0.0;         // rad
  std::pair<int, int> target{0, 1};
  bool two_photon = false;

  void validate(const DeviceSpec& device) const;
};

/// Cosine-edged flat-top envelope:
///   peak (1 - cos(pi t / rise)) / 2      on the rise,
///   peak                                 on the flat top,
///   mirrored cosine                      on the fall, 0 outside.
struct PulseEnvelope {
  double rise = 0.0;
  double flat = 0.0;
  double fall = 0.0;
  double peak = 0.0;

  double duration() const { return rise + flat + fall; }
  // Integral of the envelope and of its square.
  double area() const { return peak * (flat + 0.5 * (rise + fall)); }
  double squared_area() const { return peak * peak * (flat + 0.375 * (rise + fall)); }
  void validate() const;
};

double envelope_eval(const PulseEnvelope& env, double t);

/// Piecewise-linear angular-frequency trajectory on a uniform time grid
/// starting at t = 0, with its exact running phase integral. Constant
/// extrapolation past the last node.
class FrequencyTrajectory {
 public:
  FrequencyTrajectory() = default;
  static FrequencyTrajectory constant(double omega);
  static FrequencyTrajectory sampled(double dt, std::vector<double> omega);

  double frequency(double t) const;
  // integral_0^t omega(t') dt'
  double phase(double t) const;

  bool is_constant() const { return omega_.size() <= 1; }
  const std::vector<double>& samples() const { return omega_; }
  double dt() const { return dt_; }

 private:
  double dt_ = 0.0;
  std::vector<double> omega_;
  std::vector<double> cumulative_;
};

struct ScheduledTone {
  ToneSpec tone;
  PulseEnvelope envelope;  // envelope.peak is the tone amplitude
  double start = 0.0;
  // Carrier frequency versus absolute time; unset means the constant carrier.
  std::optional<FrequencyTrajectory> trajectory;

  double amplitude_at(double t) const { return envelope_eval(envelope, t - start); }
  double carrier_phase(double t) const;
  double carrier_frequency(double t) const;
};

/// A set of simultaneous or sequential tones plus the level-frequency
/// trajectories that define the rotating frame. Empty `level_frames` means
/// the bare frame theta_j = omega_j t.
struct PulseSchedule {
  std::vector<ScheduledTone> tones;
  double total_duration = 0.0;
  std::vector<FrequencyTrajectory> level_frames;

  void validate(const DeviceSpec& device) const;
  double frame_phase(const DeviceSpec& device, int level, double t) const;
  double frame_frequency(const DeviceSpec& device, int level, double t) const;
};

/// Rotation by `theta` about the axis (cos alpha, sin alpha, 0) in the (j, k)
/// subspace: exp(-i theta/2 (cos alpha sigma_x + sin alpha sigma_y)), so the
/// (j, k) element of the axis operator is e^{-i alpha}.
struct RotationStep {
  int j = 0;
  int k = 1;
  double alpha = 0.0;
  double theta = 0.0;
};

CMatrix rotation_unitary(const RotationStep& r, Eigen::Index dim = 3);

// Steps in temporal order; the product is step_n ... step_1.
CMatrix sequence_unitary(const std::vector<RotationStep>& steps, Eigen::Index dim = 3);

ScheduledTone make_tone(const ToneSpec& tone, double rise, double flat, double fall, double start = 0.0);

}  // namespace qutrit
