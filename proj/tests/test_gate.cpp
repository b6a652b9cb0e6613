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

#include <gtest/gtest.h>

#include "qutrit/dynamics.hpp"
#include "qutrit/gate.hpp"
#include "qutrit/tomography.hpp"

namespace qutrit {
namespace {

class WhGate : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { d_ = select_decomposition(search_decompositions(walsh_hadamard())); }

  static double average_fidelity(const DeviceSpec& dev, const GateSchedule& g, bool decoherence) {
    SimulationConfig cfg;
    cfg.include_decoherence = decoherence;
    const CMatrix u = ideal_gate(d_);
    double sum = 0.0;
    const auto preps = state_preparations().unitaries();
    for (const CMatrix& p : preps) {
      GateSequenceOptions o;
      o.virtual_phases = d_.phases;
      const GateSequenceResult r = simulate_gate_sequence(dev, p, g.schedule, {}, cfg, o);
      EXPECT_TRUE(r.physicality.ok());
      const CMatrix rin = p * thermal_state(dev.readout.thermal_p0).matrix() * p.adjoint();
      sum += qutrit_state_fidelity(r.final_state, u * rin * u.adjoint());
    }
    return sum / static_cast<double>(preps.size());
  }

  static GateDecomposition d_;
};
GateDecomposition WhGate::d_;

TEST_F(WhGate, IdealGateIsWalshHadamard) { EXPECT_LT(unitary_distance(ideal_gate(d_), walsh_hadamard().matrix()), 1e-8); }

TEST_F(WhGate, ToneAmplitudesDeliverTheGeneratorAreas) {
  const DeviceSpec dev = paper_device();
  const GateSchedule g = build_gate_schedule(dev, d_);
  ASSERT_EQ(g.schedule.tones.size(), 3u);
  EXPECT_TRUE(g.two_photon_02);
  EXPECT_NEAR(g.schedule.total_duration, 35e-9, 1e-18);
  const auto& t01 = g.schedule.tones[0];
  const auto& t12 = g.schedule.tones[1];
  const auto& t02 = g.schedule.tones[2];
  EXPECT_NEAR(dev.drive_couplings(0, 1) * t01.envelope.area(), 2.0 * std::abs(d_.m01), 1e-9);
  EXPECT_NEAR(dev.drive_couplings(1, 2) * t12.envelope.area(), 2.0 * std::abs(d_.m12), 1e-9);
  ToneSpec unit = t02.tone;
  unit.amplitude = 1.0;
  const double per_unit = std::abs(two_photon_coupling(dev, unit));
  EXPECT_NEAR(per_unit * t02.envelope.squared_area(), 2.0 * std::abs(d_.m02), 1e-9);
  EXPECT_TRUE(t02.tone.two_photon);
}

TEST_F(WhGate, EffectiveCouplingPhasesMatchGenerator) {
  const DeviceSpec dev = paper_device();
  const GateSchedule g = build_gate_schedule(dev, d_);
  const auto& t01 = g.schedule.tones[0];
  EXPECT_NEAR(std::remainder(t01.tone.phase - std::arg(d_.m01), kTwoPi), 0.0, 1e-12);
  const auto& t02 = g.schedule.tones[2];
  ToneSpec unit = t02.tone;
  unit.amplitude = 1.0;
  const double sign_phase = two_photon_coupling(dev, unit) < 0.0 ? kPi : 0.0;
  EXPECT_NEAR(std::remainder(2.0 * t02.tone.phase + sign_phase - std::arg(d_.m02), kTwoPi), 0.0, 1e-12);
}

TEST_F(WhGate, CompensationAddsFrames) {
  const DeviceSpec dev = paper_device();
  GateScheduleOptions o;
  EXPECT_EQ(build_gate_schedule(dev, d_, o).schedule.level_frames.size(), 3u);
  EXPECT_EQ(build_gate_schedule(dev, d_, o).shifts.size(), 3u);
  o.compensate = false;
  EXPECT_TRUE(build_gate_schedule(dev, d_, o).schedule.level_frames.empty());
}

TEST_F(WhGate, ClosedSystemFidelity) {
  const DeviceSpec dev = paper_device();
  EXPECT_GE(average_fidelity(dev, build_gate_schedule(dev, d_), false), 0.999);
}

TEST_F(WhGate, FidelityIsConvergedInIntegratorTolerance) {
  const DeviceSpec dev = paper_device();
  const GateSchedule g = build_gate_schedule(dev, d_);
  const CMatrix p = state_preparations().pulses[5].unitary();
  const CMatrix u = ideal_gate(d_);
  const CMatrix target = u * p * thermal_state(dev.readout.thermal_p0).matrix() * p.adjoint() * u.adjoint();
  GateSequenceOptions o;
  o.virtual_phases = d_.phases;
  SimulationConfig cfg;
  const double f1 = qutrit_state_fidelity(simulate_gate_sequence(dev, p, g.schedule, {}, cfg, o).final_state, target);
  cfg.integrator_rel_tol *= 0.5;
  cfg.integrator_abs_tol *= 0.5;
  const double f2 = qutrit_state_fidelity(simulate_gate_sequence(dev, p, g.schedule, {}, cfg, o).final_state, target);
  EXPECT_LT(std::abs(f1 - f2), 1e-7);
}

TEST_F(WhGate, CompensationMatters) {
  const DeviceSpec dev = paper_device();
  GateScheduleOptions o;
  o.compensate = false;
  const double bare = average_fidelity(dev, build_gate_schedule(dev, d_, o), false);
  const double comp = average_fidelity(dev, build_gate_schedule(dev, d_), false);
  EXPECT_LT(bare, comp - 0.01);
}

TEST_F(WhGate, ZeroAmplitudeScaleIsIdentity) {
  const DeviceSpec dev = paper_device();
  GateScheduleOptions o;
  o.amplitude_scale = 0.0;
  const GateSchedule g = build_gate_schedule(dev, d_, o);
  for (const ScheduledTone& t : g.schedule.tones) EXPECT_EQ(t.tone.amplitude, 0.0);
}

TEST_F(WhGate, Validation) {
  const DeviceSpec dev = paper_device();
  GateScheduleOptions o;
  o.rise = o.flat = o.fall = 0.0;
  EXPECT_THROW(build_gate_schedule(dev, d_, o), ValidationError);
  o = GateScheduleOptions{};
  o.amplitude_scale = -1.0;
  EXPECT_THROW(build_gate_schedule(dev, d_, o), ValidationError);
  DeviceSpec no12 = dev;
  no12.drive_couplings(1, 2) = no12.drive_couplings(2, 1) = 0.0;
  EXPECT_THROW(build_gate_schedule(no12, d_), ModelValidityError);
}

TEST_F(WhGate, DirectlyCoupledZeroTwoUsesSinglePhotonTone) {
  DeviceSpec dev = paper_device();
  dev.drive_couplings(0, 2) = dev.drive_couplings(2, 0) = dev.drive_couplings(0, 1);
  const GateSchedule g = build_gate_schedule(dev, d_);
  EXPECT_FALSE(g.two_photon_02);
  EXPECT_FALSE(g.schedule.tones[2].tone.two_photon);
}

}  // namespace
}  // namespace qutrit
