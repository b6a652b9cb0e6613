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
#include <optional>
#include <vector>

#include "qutrit/core.hpp"
#include "qutrit/drive_model.hpp"
#include "qutrit/ode.hpp"
#include "qutrit/pulse.hpp"

namespace qutrit {

enum class Frame { kLab, kRotating };

struct SimulationConfig {
  // kLab integrates the full lab-frame Hamiltonian; kRotating integrates the
  // rotating-wave model in the schedule's frame (fast, approximate).
  Frame frame = Frame::kLab;
  double integrator_rel_tol = 1e-9;
  double integrator_abs_tol = 1e-11;
  double max_step = 0.0;  // seconds, 0: unlimited
  bool include_decoherence = true;

  void validate() const;
  OdeOptions ode_options() const;
};

/// H(t) = diag(omega_j) + sum_tones a(t) cos(theta(t) + phi) G, with G the
/// full coupling matrix: the one drive line addresses every pair.
CMatrix drive_hamiltonian(const DeviceSpec& device, const PulseSchedule& schedule, double t);

/// Rotating-wave Hamiltonian in the frame U(t) = sum_j e^{i theta_j(t)} |j><j|.
/// Keeps each single-photon tone's near-resonant pairs, the effective
/// coupling of two-photon tones, and the perturbative level shifts of all
/// tones.
class RwaModel {
 public:
  RwaModel(const DeviceSpec& device, const PulseSchedule& schedule);
  CMatrix hamiltonian(double t) const;

 private:
  struct Term {
    std::size_t tone;
    int j;
    int k;
    double weight;  // element = weight * f(t) (or f(t)^2) * e^{i phase}
    bool two_photon;
  };
  const DeviceSpec* device_;
  const PulseSchedule* schedule_;
  std::vector<Term> terms_;
  std::vector<RVector> level_shifts_;
};

/// U(t) = diag(e^{i theta_j(t)}) with theta_j from the schedule's level frames.
CMatrix rotating_frame(const DeviceSpec& device, const PulseSchedule& schedule, double t);
CVector rotating_frame_state(const CVector& psi, const DeviceSpec& device, const PulseSchedule& schedule, double t);
CMatrix rotating_frame_state(const CMatrix& rho, const DeviceSpec& device, const PulseSchedule& schedule, double t);

struct StateTrajectory {
  std::vector<double> times;
  std::vector<CVector> states;  // lab frame
  CVector final_state;
  OdeStats stats;
};

struct DensityTrajectory {
  std::vector<double> times;
  std::vector<CMatrix> states;  // lab frame
  CMatrix final_state;
  OdeStats stats;
};

StateTrajectory evolve_schrodinger(const DeviceSpec& device, const PulseSchedule& schedule, const CVector& psi0,
                                   const SimulationConfig& config, const std::vector<double>& sample_times = {});

DensityTrajectory evolve_lindblad(const DeviceSpec& device, const PulseSchedule& schedule, const CMatrix& rho0,
                                  const SimulationConfig& config, const std::vector<double>& sample_times = {});

/// Lab-frame propagator of the closed system over the whole schedule.
CMatrix evolve_propagator(const DeviceSpec& device, const PulseSchedule& schedule, const SimulationConfig& config);

/// Jump operators of the qutrit-subspace master equation: sqrt(Gamma_ij) |j><i|
/// and sqrt(Gamma^R_ij) (|i><i| - |j><j|), embedded in `dim` levels.
std::vector<CMatrix> lindblad_operators(const DecoherenceRates& rates, Eigen::Index dim);

/// rho(tau) = D(tau)[R(tau)[rho0]]: relaxation/excitation propagator, then
/// each coherence rho_ij multiplied by exp(-Gamma^R_ij tau) or
/// exp(-(Gamma^R_ij tau)^2).
CMatrix free_decoherence_evolution(const CMatrix& rho0, double duration, const DecoherenceRates& rates);

/// Checks used on every evolved or reconstructed state.
struct PhysicalityReport {
  double trace_error = 0.0;
  double hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
  bool ok(double trace_tol = 1e-8, double herm_tol = 1e-10, double eig_floor = -1e-7) const {
    return trace_error <= trace_tol && hermiticity_error <= herm_tol && min_eigenvalue >= eig_floor;
  }
};
PhysicalityReport check_physical(const CMatrix& rho);

// Squared fidelity of the qutrit blocks of two density matrices that may be
// slightly off the physical set (integration round-off).
double qutrit_state_fidelity(const CMatrix& rho, const CMatrix& sigma);

// ----------------------------------------------------------------------------
// Gate sequence.

enum class AnalyzerMode { kIdeal, kPulsed };

struct PulsedRotationConfig {
  double rise = 4e-9;
  double flat = 12e-9;
  double fall = 4e-9;
};

/// Rotating-frame unitary realized by driving the steps as cosine-edged
/// resonant pulses in the lab frame.
CMatrix pulsed_sequence_unitary(const DeviceSpec& device, const std::vector<RotationStep>& steps,
                                const PulsedRotationConfig& pulse, const SimulationConfig& config);

struct GateSequenceOptions {
  // Initial state before the preparation; unset means the thermal state.
  std::optional<CMatrix> initial_state;
  // Phases phi_j of the virtual diagonal factor U_d applied after the pulse.
  std::optional<std::array<double, 3>> virtual_phases;
  AnalyzerMode analyzer_mode = AnalyzerMode::kIdeal;
  // Rotation steps per analyzer, required in pulsed mode.
  std::vector<std::vector<RotationStep>> analyzer_steps;
  PulsedRotationConfig analyzer_pulse;
};

struct GateSequenceResult {
  CMatrix final_state;  // qutrit frame, after the virtual U_d
  std::vector<double> voltages;
  PhysicalityReport physicality;
  OdeStats stats;
};

GateSequenceResult simulate_gate_sequence(const DeviceSpec& device, const CMatrix& preparation,
                                          const PulseSchedule& schedule, const std::vector<CMatrix>& analyzers,
                                          const SimulationConfig& config, const GateSequenceOptions& options = {});

// ----------------------------------------------------------------------------
// Analysis and export.

struct OscillationFit {
  double omega = 0.0;  // rad/s
  double amplitude = 0.0;
  double offset = 0.0;
  double phase = 0.0;
  double rms_residual = 0.0;
};

/// Least-squares fit of offset + amplitude cos(omega t + phase): scan omega,
/// solve the linear part exactly, refine omega with Brent's method.
OscillationFit fit_oscillation(const std::vector<double>& times, const std::vector<double>& values);

/// CSV with columns time_s,P0,P1,P2,re_rho01,im_rho01,re_rho02,im_rho02,re_rho12,im_rho12.
void write_trajectory_csv(std::ostream& out, const std::vector<double>& times, const std::vector<CMatrix>& states);
inline constexpr const char* kTrajectoryCsvHeader =
    "time_s,P0,P1,P2,re_rho01,im_rho01,re_rho02,im_rho02,re_rho12,im_rho12";

}  // namespace qutrit
