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

#include <utility>
#include <vector>

#include "qutrit/core.hpp"
#include "qutrit/pulse.hpp"

namespace qutrit {

/// Drive-induced level shifts at full tone amplitude.
/// level_shifts = ac_stark + bloch_siegert when the split is known
/// (perturbative reports); numeric reports carry only the total.
struct ShiftReport {
  RVector ac_stark;
  RVector bloch_siegert;
  RVector level_shifts;
  // transition_shifts(j, k) = level_shifts(k) - level_shifts(j).
  RMatrix transition_shifts;
  double two_photon_rabi = 0.0;
  // max |Omega_jk| / |omega_d -+ omega_jk| over the terms that were summed.
  double coupling_ratio = 0.0;
  bool components_known = true;
  bool perturbative_valid = true;  // coupling_ratio <= 0.3
  bool tracking_ambiguous = false;

  static ShiftReport zero(int n_levels);
  double transition(int j, int k) const { return transition_shifts(j, k); }
  ShiftReport& operator+=(const ShiftReport& other);
};

inline constexpr double kPerturbativeRatioLimit = 0.3;

/// Second-order shift sums over all level pairs of the device. For a
/// single-photon tone the ac-Stark term of its own (resonant) target pair is
/// left out: that pair is the driven transition, not a perturbation.
/// Throws ModelValidityError on a vanishing denominator.
ShiftReport perturbative_shifts(const DeviceSpec& device, const ToneSpec& tone);

/// Signed effective two-photon coupling sum_m Omega_jm Omega_mk / (2 (omega_d - omega_jm)).
double two_photon_coupling(const DeviceSpec& device, const ToneSpec& tone);

/// |sum_m Omega_jm Omega_mk / (2 (omega_d - omega_jm))| over intermediate levels
/// m of the tone's target pair (j, k).
double two_photon_rabi(const DeviceSpec& device, const ToneSpec& tone);

// ----------------------------------------------------------------------------
// Dressed (photon-block) picture.

/// Smallest block count with n_levels * (2 blocks + 1) >= 49, at least 3.
int default_dressed_blocks(int n_levels);

/// Real symmetric matrix on |j, n>, n = -blocks..blocks, index
/// (n + blocks) * N + j. Diagonal omega_j + n omega_d; |j, n> couples to
/// |k, n +- 1> with g_jk * amplitude / 2.
RMatrix build_dressed_hamiltonian(const DeviceSpec& device, const ToneSpec& tone, int blocks);

struct DressedLabel {
  int level = 0;
  int photons = 0;
};

struct DressedSpectrum {
  int truncation_blocks = 0;
  RVector eigenvalues;  // indexed like the bare basis: entry i belongs to assignments[i]
  RMatrix eigenvectors;
  std::vector<DressedLabel> assignments;
  bool ambiguous = false;
  double min_overlap = 1.0;

  int index_of(int level, int photons) const;
};

struct ContinuationOptions {
  int initial_steps = 16;
  double min_overlap = 0.9;
  int max_halvings = 12;
};

/// Diagonalizes the dressed Hamiltonian and labels every eigenpair by the bare
/// state it connects to, following eigenvectors by maximal overlap while the
/// amplitude ramps up from zero. Labels that cannot be followed with overlap
/// >= min_overlap even at the finest step are flagged, not guessed.
DressedSpectrum diagonalize_dressed(const DeviceSpec& device, const ToneSpec& tone, int blocks,
                                    const ContinuationOptions& opts = {});

struct NumericShiftOptions {
  int blocks = 0;  // 0 selects default_dressed_blocks
  // Added to the carrier before diagonalizing. A tone exactly on resonance
  // makes two dressed levels degenerate at zero amplitude, so shifts are
  // probed slightly off resonance, as in the experiment.
  double probe_detuning = 0.0;
  bool anticrossing_gap = true;
  double gap_search_halfwidth = kTwoPi * 30e6;
  ContinuationOptions continuation;
};

/// Shifts of the central-block dressed levels relative to the bare ones. For
/// two-photon tones the Rabi rate is the minimum dressed gap between the
/// |k, 0> and |j, 2> branches over the carrier frequency.
ShiftReport numeric_shifts(const DeviceSpec& device, const ToneSpec& tone,
                           const NumericShiftOptions& opts = {});

struct AnticrossingGap {
  double gap = 0.0;             // rad/s
  double carrier_at_min = 0.0;  // rad/s
};

AnticrossingGap dressed_anticrossing_gap(const DeviceSpec& device, const ToneSpec& tone, int blocks,
                                         double halfwidth);

// ----------------------------------------------------------------------------
// Shift compensation.

enum class ShiftMode { kPerturbative, kNumeric };

struct CompensationOptions {
  ShiftMode mode = ShiftMode::kPerturbative;
  int samples = 4000;
  // Used in numeric mode for two-photon tones; single-photon tones always use
  // the perturbative sums.
  NumericShiftOptions numeric{0, kTwoPi * 50e6, false, kTwoPi * 30e6, {}};
};

/// Per-tone level shifts at full amplitude, as used by compensation.
std::vector<ShiftReport> tone_shift_reports(const DeviceSpec& device, const PulseSchedule& schedule,
                                            const CompensationOptions& opts = {});

/// Replaces the level frames by theta_j(t) = int omega_j + delta_j(t) and each
/// carrier by the matching shifted transition frequency (half of it for
/// two-photon tones), keeping the tone's offset from the bare transition.
/// delta_j(t) = sum over tones of the full-amplitude shift times
/// (envelope(t) / peak)^2.
PulseSchedule compensated_trajectories(const DeviceSpec& device, const PulseSchedule& schedule,
                                       const CompensationOptions& opts = {});

/// Size of the neglected adiabatic correction h_mn = i pdot <m|d_p n> for the
/// lowest three dressed states under one tone with the given envelope.
struct CorrectionEstimate {
  double max_offdiagonal = 0.0;  // rad/s
  double relative_to_rabi = 0.0;
};

CorrectionEstimate adiabatic_correction_magnitude(const DeviceSpec& device, const ToneSpec& tone,
                                                  const PulseEnvelope& envelope);

}  // namespace qutrit
