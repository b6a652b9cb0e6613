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

#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "qutrit/pulse.hpp"

namespace qutrit {
namespace {

double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

TEST(Envelope, AreaMatchesQuadrature) {
  const PulseEnvelope e{4e-9, 27e-9, 6e-9, 1.3};
  const double num = simpson([&](double t) { return envelope_eval(e, t); }, 0.0, e.duration());
  EXPECT_NEAR(e.area(), num, 1e-9 * e.area());
  const double num2 = simpson([&](double t) { return std::pow(envelope_eval(e, t), 2); }, 0.0, e.duration());
  EXPECT_NEAR(e.squared_area(), num2, 1e-9 * e.squared_area());
}

TEST(Envelope, ShapeAndSupport) {
  const PulseEnvelope e{4e-9, 10e-9, 4e-9, 2.0};
  EXPECT_EQ(envelope_eval(e, -1e-12), 0.0);
  EXPECT_EQ(envelope_eval(e, e.duration() + 1e-12), 0.0);
  EXPECT_NEAR(envelope_eval(e, 2e-9), 1.0, 1e-12);
  EXPECT_EQ(envelope_eval(e, 9e-9), 2.0);
  EXPECT_NEAR(envelope_eval(e, 16e-9), 1.0, 1e-12);
  EXPECT_NEAR(envelope_eval(e, 0.0), 0.0, 1e-15);
}

TEST(Envelope, SquareWhenRampsVanish) {
  const PulseEnvelope e{0.0, 5e-9, 0.0, 0.7};
  EXPECT_DOUBLE_EQ(e.area(), 0.7 * 5e-9);
  EXPECT_DOUBLE_EQ(envelope_eval(e, 0.0), 0.7);
  EXPECT_DOUBLE_EQ(envelope_eval(e, 5e-9), 0.7);
}

TEST(Envelope, Validation) {
  EXPECT_THROW((PulseEnvelope{-1e-9, 1e-9, 1e-9, 1.0}.validate()), ValidationError);
  EXPECT_THROW((PulseEnvelope{1e-9, 1e-9, 1e-9, std::nan("")}.validate()), ValidationError);
}

TEST(Trajectory, ConstantPhaseIsLinear) {
  const FrequencyTrajectory f = FrequencyTrajectory::constant(3.0);
  EXPECT_TRUE(f.is_constant());
  EXPECT_DOUBLE_EQ(f.phase(2.0), 6.0);
  EXPECT_DOUBLE_EQ(f.frequency(10.0), 3.0);
}

TEST(Trajectory, PhaseIsIntegralOfFrequency) {
  std::vector<double> w;
  for (int i = 0; i <= 50; ++i) w.push_back(10.0 + std::sin(0.3 * i));
  const FrequencyTrajectory f = FrequencyTrajectory::sampled(0.1, w);
  for (double t : {0.05, 1.234, 4.99, 5.0, 6.5}) {
    const double num = simpson([&](double s) { return f.frequency(s); }, 0.0, t, 200000);
    EXPECT_NEAR(f.phase(t), num, 1e-6) << "t = " << t;
  }
  EXPECT_DOUBLE_EQ(f.frequency(100.0), w.back());
}

TEST(Trajectory, Validation) {
  EXPECT_THROW(FrequencyTrajectory::sampled(0.1, {}), ValidationError);
  EXPECT_THROW(FrequencyTrajectory::sampled(0.0, {1.0, 2.0}), ValidationError);
  EXPECT_THROW(FrequencyTrajectory::sampled(0.1, {1.0, std::nan("")}), ValidationError);
}

TEST(Schedule, ValidateCatchesMismatches) {
  const DeviceSpec d = paper_device();
  ToneSpec t{0.5, d.transition_freq(0, 1), 0.0, {0, 1}, false};
  PulseSchedule s;
  s.tones.push_back(make_tone(t, 1e-9, 2e-9, 1e-9));
  s.total_duration = 4e-9;
  EXPECT_NO_THROW(s.validate(d));
  s.total_duration = 3e-9;
  EXPECT_THROW(s.validate(d), ValidationError);
  s.total_duration = 4e-9;
  s.tones[0].envelope.peak = 0.6;
  EXPECT_THROW(s.validate(d), ValidationError);
  ToneSpec bad = t;
  bad.target = {1, 1};
  EXPECT_THROW(bad.validate(d), ValidationError);
  bad = t;
  bad.carrier_freq = 0.0;
  EXPECT_THROW(bad.validate(d), ValidationError);
}

TEST(Schedule, FramesDefaultToBareLevels) {
  const DeviceSpec d = paper_device();
  PulseSchedule s;
  EXPECT_DOUBLE_EQ(s.frame_phase(d, 2, 1e-9), d.level_freqs(2) * 1e-9);
  EXPECT_DOUBLE_EQ(s.frame_frequency(d, 1, 0.0), d.level_freqs(1));
}

TEST(Rotation, PiPulseSwapsPopulation) {
  const CMatrix u = rotation_unitary({0, 1, 0.0, kPi});
  EXPECT_NEAR(std::abs(u(1, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(u(2, 2)), 1.0, 1e-15);
  EXPECT_TRUE((u * u.adjoint()).isIdentity(1e-14));
}

TEST(Rotation, MatchesExponentialOfPauli) {
  const RotationStep r{1, 2, 0.7, 1.1};
  CMatrix h = CMatrix::Zero(3, 3);
  h(1, 2) = 0.5 * std::exp(-kI * r.alpha);
  h(2, 1) = std::conj(h(1, 2));
  const CMatrix expect = expm_skew(h, r.theta).matrix();
  EXPECT_LT((rotation_unitary(r) - expect).norm(), 1e-13);
}

TEST(Rotation, SequenceAppliesFirstStepFirst) {
  const RotationStep a{0, 1, 0.0, kPi};
  const RotationStep b{1, 2, 0.0, kPi};
  const CMatrix u = sequence_unitary({a, b});
  EXPECT_LT((u - rotation_unitary(b) * rotation_unitary(a)).norm(), 1e-15);
  // |0> -> |1> -> |2>
  EXPECT_NEAR(std::abs(u(2, 0)), 1.0, 1e-14);
  EXPECT_THROW(rotation_unitary({0, 0, 0.0, 1.0}), ValidationError);
  EXPECT_THROW(rotation_unitary({0, 3, 0.0, 1.0}), ValidationError);
}

}  // namespace
}  // namespace qutrit
