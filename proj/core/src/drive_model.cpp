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

#include "qutrit/drive_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/tools/minima.hpp>

namespace qutrit {
namespace {

void finalize(ShiftReport& r) {
  const Eigen::Index n = r.level_shifts.size();
  r.transition_shifts.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) r.transition_shifts(j, k) = r.level_shifts(k) - r.level_shifts(j);
  r.perturbative_valid = r.coupling_ratio <= kPerturbativeRatioLimit;
}

bool is_target(const ToneSpec& tone, int l, int u) { return tone.target.first == l && tone.target.second == u; }

double resonance_tolerance(double a, double b) { return 1e-12 * std::max({std::abs(a), std::abs(b), 1.0}); }

// Bare resonance the tone addresses: omega_jk, or omega_jk / 2 for two photons.
double bare_carrier(const DeviceSpec& device, const ToneSpec& tone) {
  const double w = device.transition_freq(tone.target.first, tone.target.second);
  return tone.two_photon ? 0.5 * w : w;
}

double coupling_ratio(const DeviceSpec& device, const ToneSpec& tone) {
  double ratio = 0.0;
  const int n = device.n_levels();
  for (int l = 0; l < n; ++l) {
    for (int u = l + 1; u < n; ++u) {
      const double om = std::abs(device.drive_couplings(l, u) * tone.amplitude);
      if (om == 0.0) continue;
      const double wlu = device.transition_freq(l, u);
      ratio = std::max(ratio, om / std::abs(tone.carrier_freq + wlu));
      if (!tone.two_photon && is_target(tone, l, u)) continue;
      const double den = std::abs(tone.carrier_freq - wlu);
      ratio = std::max(ratio, den > 0.0 ? om / den : std::numeric_limits<double>::infinity());
    }
  }
  return ratio;
}

}  // namespace

ShiftReport ShiftReport::zero(int n_levels) {
  ShiftReport r;
  r.ac_stark = RVector::Zero(n_levels);
  r.bloch_siegert = RVector::Zero(n_levels);
  r.level_shifts = RVector::Zero(n_levels);
  r.transition_shifts = RMatrix::Zero(n_levels, n_levels);
  return r;
}

ShiftReport& ShiftReport::operator+=(const ShiftReport& other) {
  if (other.level_shifts.size() != level_shifts.size())
    throw ValidationError("cannot add shift reports of different level counts");
  ac_stark += other.ac_stark;
  bloch_siegert += other.bloch_siegert;
  level_shifts += other.level_shifts;
  transition_shifts += other.transition_shifts;
  // Rabi rates belong to individual tones; keep the largest.
  two_photon_rabi = std::max(two_photon_rabi, other.two_photon_rabi);
  coupling_ratio = std::max(coupling_ratio, other.coupling_ratio);
  components_known = components_known && other.components_known;
  perturbative_valid = perturbative_valid && other.perturbative_valid;
  tracking_ambiguous = tracking_ambiguous || other.tracking_ambiguous;
  return *this;
}

ShiftReport perturbative_shifts(const DeviceSpec& device, const ToneSpec& tone) {
  tone.validate(device);
  const int n = device.n_levels();
  ShiftReport r = ShiftReport::zero(n);
  if (tone.amplitude == 0.0) return r;

  const double wd = tone.carrier_freq;
  for (int l = 0; l < n; ++l) {
    for (int u = l + 1; u < n; ++u) {
      const double om = device.drive_couplings(l, u) * tone.amplitude;
      if (om == 0.0) continue;
      const double om2 = om * om;
      const double wlu = device.transition_freq(l, u);

      const double bs = om2 / (4.0 * (wd + wlu));
      r.bloch_siegert(l) -= bs;
      r.bloch_siegert(u) += bs;

      if (!tone.two_photon && is_target(tone, l, u)) continue;
      const double den = wd - wlu;
      if (std::abs(den) <= resonance_tolerance(wd, wlu)) {
        std::ostringstream msg;
        msg << "drive at " << wd << " rad/s is resonant with the " << l << "-" << u
            << " transition; perturbative shifts are undefined";
        throw ModelValidityError(msg.str());
      }
      const double acs = om2 / (4.0 * den);
      r.ac_stark(l) += acs;
      r.ac_stark(u) -= acs;
    }
  }
  r.level_shifts = r.ac_stark + r.bloch_siegert;
  r.coupling_ratio = coupling_ratio(device, tone);
  if (tone.two_photon) r.two_photon_rabi = two_photon_rabi(device, tone);
  finalize(r);
  return r;
}

double two_photon_coupling(const DeviceSpec& device, const ToneSpec& tone) {
  tone.validate(device);
  const auto [j, k] = tone.target;
  double sum = 0.0;
  for (int m = 0; m < device.n_levels(); ++m) {
    if (m == j || m == k) continue;
    const double om_jm = device.drive_couplings(j, m) * tone.amplitude;
    const double om_mk = device.drive_couplings(m, k) * tone.amplitude;
    if (om_jm == 0.0 || om_mk == 0.0) continue;
    const double wjm = device.transition_freq(j, m);
    const double den = tone.carrier_freq - wjm;
    if (std::abs(den) <= resonance_tolerance(tone.carrier_freq, wjm))
      throw ModelValidityError("two-photon drive is resonant with an intermediate transition");
    sum += om_jm * om_mk / (2.0 * den);
  }
  return sum;
}

double two_photon_rabi(const DeviceSpec& device, const ToneSpec& tone) {
  return std::abs(two_photon_coupling(device, tone));
}

// ----------------------------------------------------------------------------

int default_dressed_blocks(int n_levels) {
  if (n_levels <= 0) throw ValidationError("device must have levels");
  int b = 3;
  while (n_levels * (2 * b + 1) < 49) ++b;
  return b;
}

RMatrix build_dressed_hamiltonian(const DeviceSpec& device, const ToneSpec& tone, int blocks) {
  tone.validate(device);
  if (blocks < 3)
    throw ValidationError("dressed Hamiltonian needs at least 3 photon blocks to hold the two-photon manifold");
  const int n = device.n_levels();
  const int nb = 2 * blocks + 1;
  RMatrix h = RMatrix::Zero(n * nb, n * nb);
  for (int b = 0; b < nb; ++b) {
    const int photons = b - blocks;
    for (int j = 0; j < n; ++j) h(b * n + j, b * n + j) = device.level_freqs(j) + photons * tone.carrier_freq;
    if (b + 1 == nb) continue;
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const double c = 0.5 * device.drive_couplings(j, k) * tone.amplitude;
        if (c == 0.0) continue;
        h(b * n + j, (b + 1) * n + k) = c;
        h((b + 1) * n + k, b * n + j) = c;
      }
    }
  }
  return h;
}

int DressedSpectrum::index_of(int level, int photons) const {
  const int n = static_cast<int>(assignments.size()) / (2 * truncation_blocks + 1);
  if (level < 0 || level >= n || std::abs(photons) > truncation_blocks)
    throw ValidationError("dressed label outside the truncated space");
  return (photons + truncation_blocks) * n + level;
}

DressedSpectrum diagonalize_dressed(const DeviceSpec& device, const ToneSpec& tone, int blocks,
                                    const ContinuationOptions& opts) {
  const RMatrix h0 = build_dressed_hamiltonian(device, ToneSpec{0.0, tone.carrier_freq, tone.phase, tone.target,
                                                                tone.two_photon},
                                               blocks);
  const RMatrix h1 = build_dressed_hamiltonian(device, tone, blocks);
  const int n = device.n_levels();
  const Eigen::Index dim = h0.rows();

  DressedSpectrum out;
  out.truncation_blocks = blocks;
  out.assignments.resize(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i)
    out.assignments[static_cast<std::size_t>(i)] = DressedLabel{static_cast<int>(i % n),
                                                                static_cast<int>(i / n) - blocks};
  out.eigenvalues = h0.diagonal();
  out.eigenvectors = RMatrix::Identity(dim, dim);
  if (tone.amplitude == 0.0) return out;

  // Central-block states of the lowest three levels decide the step size.
  std::vector<Eigen::Index> watched;
  for (int j = 0; j < std::min(n, 3); ++j) watched.push_back(static_cast<Eigen::Index>(blocks) * n + j);

  const double base_step = 1.0 / std::max(1, opts.initial_steps);
  const double min_step = base_step * std::ldexp(1.0, -opts.max_halvings);
  double s = 0.0;
  double ds = base_step;
  RMatrix tracked = out.eigenvectors;
  RVector values = out.eigenvalues;
  Eigen::SelfAdjointEigenSolver<RMatrix> solver;

  while (s < 1.0) {
    const double s_next = std::min(1.0, s + ds);
    solver.compute(h0 + s_next * (h1 - h0));
    if (solver.info() != Eigen::Success) throw NumericalError("dressed Hamiltonian diagonalization failed");
    const RMatrix overlap = (tracked.transpose() * solver.eigenvectors()).cwiseAbs2();

    // Greedy bijection by descending overlap.
    std::vector<Eigen::Index> pick(static_cast<std::size_t>(dim), -1);
    std::vector<bool> used(static_cast<std::size_t>(dim), false);
    std::vector<std::pair<double, Eigen::Index>> order;
    order.reserve(static_cast<std::size_t>(dim));
    for (Eigen::Index i = 0; i < dim; ++i) order.emplace_back(-overlap.row(i).maxCoeff(), i);
    std::sort(order.begin(), order.end());
    for (const auto& [neg, i] : order) {
      Eigen::Index best = -1;
      double best_val = -1.0;
      for (Eigen::Index c = 0; c < dim; ++c) {
        if (!used[static_cast<std::size_t>(c)] && overlap(i, c) > best_val) {
          best_val = overlap(i, c);
          best = c;
        }
      }
      pick[static_cast<std::size_t>(i)] = best;
      used[static_cast<std::size_t>(best)] = true;
    }
    double worst = 1.0;
    for (Eigen::Index i : watched) worst = std::min(worst, overlap(i, pick[static_cast<std::size_t>(i)]));

    if (worst < opts.min_overlap && ds > min_step) {
      ds *= 0.5;
      continue;
    }
    if (worst < opts.min_overlap) out.ambiguous = true;
    out.min_overlap = std::min(out.min_overlap, worst);

    for (Eigen::Index i = 0; i < dim; ++i) {
      const Eigen::Index c = pick[static_cast<std::size_t>(i)];
      RVector v = solver.eigenvectors().col(c);
      if (tracked.col(i).dot(v) < 0.0) v = -v;
      tracked.col(i) = v;
      values(i) = solver.eigenvalues()(c);
    }
    s = s_next;
    ds = std::min(base_step, 2.0 * ds);
  }
  out.eigenvalues = values;
  out.eigenvectors = tracked;
  return out;
}

AnticrossingGap dressed_anticrossing_gap(const DeviceSpec& device, const ToneSpec& tone, int blocks,
                                         double halfwidth) {
  tone.validate(device);
  if (!(halfwidth > 0.0)) throw ValidationError("anticrossing search half-width must be positive");
  const auto [j, k] = tone.target;
  const int n = device.n_levels();
  const double center = 0.5 * device.transition_freq(j, k);
  if (!(center - halfwidth > 0.0)) throw ValidationError("anticrossing search window reaches zero frequency");
  const Eigen::Index a = static_cast<Eigen::Index>(blocks) * n + k;        // |k, 0>
  const Eigen::Index b = static_cast<Eigen::Index>(blocks + 2) * n + j;    // |j, 2>

  Eigen::SelfAdjointEigenSolver<RMatrix> solver;
  auto gap_at = [&](double offset) {
    ToneSpec probe = tone;
    probe.carrier_freq = center + offset;
    solver.compute(build_dressed_hamiltonian(device, probe, blocks));
    const RMatrix& v = solver.eigenvectors();
    RVector weight = v.row(a).cwiseAbs2().transpose() + v.row(b).cwiseAbs2().transpose();
    Eigen::Index first = 0;
    weight.maxCoeff(&first);
    weight(first) = -1.0;
    Eigen::Index second = 0;
    weight.maxCoeff(&second);
    return std::abs(solver.eigenvalues()(first) - solver.eigenvalues()(second));
  };
  const auto [x, g] = boost::math::tools::brent_find_minima(gap_at, -halfwidth, halfwidth, 40);
  return AnticrossingGap{g, center + x};
}

ShiftReport numeric_shifts(const DeviceSpec& device, const ToneSpec& tone, const NumericShiftOptions& opts) {
  tone.validate(device);
  const int n = device.n_levels();
  const int blocks = opts.blocks > 0 ? opts.blocks : default_dressed_blocks(n);
  ShiftReport r = ShiftReport::zero(n);
  r.components_known = false;
  if (tone.amplitude == 0.0) return r;

  ToneSpec probe = tone;
  probe.carrier_freq += opts.probe_detuning;
  const DressedSpectrum spec = diagonalize_dressed(device, probe, blocks, opts.continuation);
  for (int j = 0; j < n; ++j) r.level_shifts(j) = spec.eigenvalues(spec.index_of(j, 0)) - device.level_freqs(j);
  r.tracking_ambiguous = spec.ambiguous;
  r.coupling_ratio = coupling_ratio(device, probe);
  if (tone.two_photon && opts.anticrossing_gap)
    r.two_photon_rabi = dressed_anticrossing_gap(device, tone, blocks, opts.gap_search_halfwidth).gap;
  finalize(r);
  return r;
}

// ----------------------------------------------------------------------------

std::vector<ShiftReport> tone_shift_reports(const DeviceSpec& device, const PulseSchedule& schedule,
                                            const CompensationOptions& opts) {
  std::vector<ShiftReport> out;
  out.reserve(schedule.tones.size());
  for (const ScheduledTone& st : schedule.tones) {
    if (opts.mode == ShiftMode::kNumeric && st.tone.two_photon) {
      ShiftReport r = numeric_shifts(device, st.tone, opts.numeric);
      if (r.tracking_ambiguous)
        throw NumericalError("dressed-level tracking is ambiguous; increase the probe detuning");
      out.push_back(std::move(r));
    } else {
      out.push_back(perturbative_shifts(device, st.tone));
    }
  }
  return out;
}

PulseSchedule compensated_trajectories(const DeviceSpec& device, const PulseSchedule& schedule,
                                       const CompensationOptions& opts) {
  schedule.validate(device);
  const bool any_drive = std::any_of(schedule.tones.begin(), schedule.tones.end(),
                                     [](const ScheduledTone& st) { return st.envelope.peak > 0.0; });
  if (!any_drive || schedule.total_duration == 0.0) return schedule;
  if (opts.samples < 2) throw ValidationError("compensation needs at least 2 samples");

  const std::vector<ShiftReport> reports = tone_shift_reports(device, schedule, opts);
  const int n = device.n_levels();
  const std::size_t nodes = static_cast<std::size_t>(opts.samples) + 1;
  const double dt = schedule.total_duration / opts.samples;

  std::vector<std::vector<double>> level(static_cast<std::size_t>(n), std::vector<double>(nodes));
  for (std::size_t i = 0; i < nodes; ++i) {
    const double t = dt * static_cast<double>(i);
    RVector w = device.level_freqs;
    for (std::size_t k = 0; k < schedule.tones.size(); ++k) {
      const ScheduledTone& st = schedule.tones[k];
      if (st.envelope.peak == 0.0) continue;
      const double f = st.amplitude_at(t) / st.envelope.peak;
      w += (f * f) * reports[k].level_shifts;
    }
    for (int j = 0; j < n; ++j) level[static_cast<std::size_t>(j)][i] = w(j);
  }

  PulseSchedule out = schedule;
  out.level_frames.clear();
  for (int j = 0; j < n; ++j) out.level_frames.push_back(FrequencyTrajectory::sampled(dt, level[static_cast<std::size_t>(j)]));

  for (ScheduledTone& st : out.tones) {
    const auto [j, k] = st.tone.target;
    const double offset = st.tone.carrier_freq - bare_carrier(device, st.tone);
    const double scale = st.tone.two_photon ? 0.5 : 1.0;
    std::vector<double> w(nodes);
    for (std::size_t i = 0; i < nodes; ++i)
      w[i] = offset + scale * (level[static_cast<std::size_t>(k)][i] - level[static_cast<std::size_t>(j)][i]);
    st.trajectory = FrequencyTrajectory::sampled(dt, std::move(w));
  }
  return out;
}

CorrectionEstimate adiabatic_correction_magnitude(const DeviceSpec& device, const ToneSpec& tone,
                                                  const PulseEnvelope& envelope) {
  tone.validate(device);
  envelope.validate();
  CorrectionEstimate est;
  if (tone.amplitude == 0.0) return est;
  const double edge = std::min(envelope.rise, envelope.fall);
  if (edge == 0.0) {
    est.max_offdiagonal = std::numeric_limits<double>::infinity();
    est.relative_to_rabi = std::numeric_limits<double>::infinity();
    return est;
  }
  const double pdot_max = kPi / (2.0 * edge);

  // The driven transition itself is the Rabi term, not a correction: drop it
  // (single photon) or step off the degenerate two-photon point.
  DeviceSpec dev = device;
  ToneSpec probe = tone;
  const auto [j, k] = tone.target;
  if (tone.two_photon) {
    probe.carrier_freq += kTwoPi * 50e6;
  } else {
    dev.drive_couplings(j, k) = 0.0;
    dev.drive_couplings(k, j) = 0.0;
  }
  const int blocks = default_dressed_blocks(dev.n_levels());
  const int n = dev.n_levels();
  const double dp = 1e-4;

  for (double p : {0.25, 0.5, 0.75, 1.0 - dp}) {
    auto states = [&](double amp) {
      ToneSpec t = probe;
      t.amplitude = amp * tone.amplitude;
      return diagonalize_dressed(dev, t, blocks).eigenvectors;
    };
    const RMatrix v0 = states(p);
    const RMatrix vm = states(p - dp);
    const RMatrix vp = states(p + dp);
    for (int q = 0; q < std::min(n, 3); ++q) {
      const Eigen::Index iq = static_cast<Eigen::Index>(blocks) * n + q;
      for (int photons = -2; photons <= 2; ++photons) {
        for (int m = 0; m < std::min(n, 3); ++m) {
          const Eigen::Index im = static_cast<Eigen::Index>(blocks + photons) * n + m;
          if (im == iq) continue;
          const double d = v0.col(im).dot(vp.col(iq) - vm.col(iq)) / (2.0 * dp);
          est.max_offdiagonal = std::max(est.max_offdiagonal, pdot_max * std::abs(d));
        }
      }
    }
  }
  const double rabi = tone.two_photon ? two_photon_rabi(device, tone)
                                      : std::abs(device.drive_couplings(j, k) * tone.amplitude);
  est.relative_to_rabi = rabi > 0.0 ? est.max_offdiagonal / rabi : std::numeric_limits<double>::infinity();
  return est;
}

}  // namespace qutrit
