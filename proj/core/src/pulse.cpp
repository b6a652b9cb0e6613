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

#include "qutrit/pulse.hpp"

#include <cmath>
#include <sstream>

namespace qutrit {

void ToneSpec::validate(const DeviceSpec& device) const {
  if (!(amplitude >= 0.0)) throw ValidationError("tone amplitude must be non-negative");
  if (!(carrier_freq > 0.0)) throw ValidationError("tone carrier frequency must be positive");
  const auto [j, k] = target;
  if (j < 0 || k < 0 || j >= device.n_levels() || k >= device.n_levels() || j >= k)
    throw ValidationError("tone target must be a level pair (j, k) with j < k");
}

void PulseEnvelope::validate() const {
  if (!(rise >= 0.0 && flat >= 0.0 && fall >= 0.0)) throw ValidationError("envelope durations must be >= 0");
  if (!std::isfinite(peak) || peak < 0.0) throw ValidationError("envelope peak must be finite and >= 0");
}

double envelope_eval(const PulseEnvelope& env, double t) {
  const double total = env.duration();
  if (t < 0.0 || t > total) return 0.0;
  if (t < env.rise) return env.peak * 0.5 * (1.0 - std::cos(kPi * t / env.rise));
  if (t <= env.rise + env.flat) return env.peak;
  const double to_end = total - t;
  return env.peak * 0.5 * (1.0 - std::cos(kPi * to_end / env.fall));
}

FrequencyTrajectory FrequencyTrajectory::constant(double omega) {
  FrequencyTrajectory f;
  f.omega_ = {omega};
  f.cumulative_ = {0.0};
  return f;
}

FrequencyTrajectory FrequencyTrajectory::sampled(double dt, std::vector<double> omega) {
  if (omega.empty()) throw ValidationError("frequency trajectory needs at least one sample");
  if (omega.size() > 1 && !(dt > 0.0)) throw ValidationError("trajectory spacing must be positive");
  for (double w : omega)
    if (!std::isfinite(w)) throw ValidationError("frequency trajectory must be finite");
  FrequencyTrajectory f;
  f.dt_ = dt;
  f.omega_ = std::move(omega);
  f.cumulative_.resize(f.omega_.size());
  f.cumulative_[0] = 0.0;
  for (std::size_t i = 1; i < f.omega_.size(); ++i)
    f.cumulative_[i] = f.cumulative_[i - 1] + 0.5 * dt * (f.omega_[i - 1] + f.omega_[i]);
  return f;
}

double FrequencyTrajectory::frequency(double t) const {
  if (omega_.size() == 1) return omega_[0];
  if (t <= 0.0) return omega_.front();
  const double x = t / dt_;
  const std::size_t i = static_cast<std::size_t>(x);
  if (i + 1 >= omega_.size()) return omega_.back();
  const double frac = x - static_cast<double>(i);
  return omega_[i] + frac * (omega_[i + 1] - omega_[i]);
}

double FrequencyTrajectory::phase(double t) const {
  if (omega_.size() == 1) return omega_[0] * t;
  if (t <= 0.0) return omega_.front() * t;
  const double x = t / dt_;
  const std::size_t i = static_cast<std::size_t>(x);
  if (i + 1 >= omega_.size()) {
    const double t_end = dt_ * static_cast<double>(omega_.size() - 1);
    return cumulative_.back() + omega_.back() * (t - t_end);
  }
  const double tau = t - dt_ * static_cast<double>(i);
  const double slope = (omega_[i + 1] - omega_[i]) / dt_;
  return cumulative_[i] + omega_[i] * tau + 0.5 * slope * tau * tau;
}

double ScheduledTone::carrier_phase(double t) const {
  return trajectory ? trajectory->phase(t) : tone.carrier_freq * t;
}

double ScheduledTone::carrier_frequency(double t) const {
  return trajectory ? trajectory->frequency(t) : tone.carrier_freq;
}

void PulseSchedule::validate(const DeviceSpec& device) const {
  if (!(total_duration >= 0.0) || !std::isfinite(total_duration))
    throw ValidationError("schedule duration must be finite and >= 0");
  for (std::size_t i = 0; i < tones.size(); ++i) {
    const ScheduledTone& st = tones[i];
    st.tone.validate(device);
    st.envelope.validate();
    if (std::abs(st.envelope.peak - st.tone.amplitude) > 1e-12 * std::max(1.0, st.tone.amplitude)) {
      std::ostringstream msg;
      msg << "tone " << i << ": envelope peak differs from tone amplitude";
      throw ValidationError(msg.str());
    }
    if (st.start < 0.0 || st.start + st.envelope.duration() > total_duration * (1.0 + 1e-12) + 1e-18) {
      std::ostringstream msg;
      msg << "tone " << i << " does not fit within the schedule duration";
      throw ValidationError(msg.str());
    }
  }
  if (!level_frames.empty() && static_cast<int>(level_frames.size()) != device.n_levels())
    throw ValidationError("level frame trajectories must cover every device level");
}

double PulseSchedule::frame_phase(const DeviceSpec& device, int level, double t) const {
  if (level_frames.empty()) return device.level_freqs(level) * t;
  return level_frames[static_cast<std::size_t>(level)].phase(t);
}

double PulseSchedule::frame_frequency(const DeviceSpec& device, int level, double t) const {
  if (level_frames.empty()) return device.level_freqs(level);
  return level_frames[static_cast<std::size_t>(level)].frequency(t);
}

CMatrix rotation_unitary(const RotationStep& r, Eigen::Index dim) {
  if (r.j < 0 || r.k < 0 || r.j == r.k || r.j >= dim || r.k >= dim)
    throw ValidationError("rotation subspace must be two distinct levels inside the space");
  if (!std::isfinite(r.theta) || !std::isfinite(r.alpha)) throw ValidationError("rotation angles must be finite");
  CMatrix u = CMatrix::Identity(dim, dim);
  const double c = std::cos(0.5 * r.theta);
  const double s = std::sin(0.5 * r.theta);
  u(r.j, r.j) = c;
  u(r.k, r.k) = c;
  u(r.j, r.k) = -kI * s * std::exp(-kI * r.alpha);
  u(r.k, r.j) = -kI * s * std::exp(kI * r.alpha);
  return u;
}

CMatrix sequence_unitary(const std::vector<RotationStep>& steps, Eigen::Index dim) {
  CMatrix u = CMatrix::Identity(dim, dim);
  for (const RotationStep& r : steps) u = rotation_unitary(r, dim) * u;
  return u;
}

ScheduledTone make_tone(const ToneSpec& tone, double rise, double flat, double fall, double start) {
  ScheduledTone st;
  st.tone = tone;
  st.envelope = PulseEnvelope{rise, flat, fall, tone.amplitude};
  st.start = start;
  return st;
}

}  // namespace qutrit
