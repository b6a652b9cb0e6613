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

#include "qutrit/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include <boost/math/tools/minima.hpp>
#include <unsupported/Eigen/MatrixFunctions>

namespace qutrit {
namespace {

CMatrix embed(const CMatrix& u, Eigen::Index dim) {
  if (u.rows() == dim) return u;
  if (u.rows() > dim || u.rows() != u.cols()) throw ValidationError("operator does not fit the device dimension");
  CMatrix out = CMatrix::Identity(dim, dim);
  out.topLeftCorner(u.rows(), u.cols()) = u;
  return out;
}

CMatrix embed_state(const CMatrix& rho, Eigen::Index dim) {
  if (rho.rows() == dim) return rho;
  if (rho.rows() > dim || rho.rows() != rho.cols()) throw ValidationError("state does not fit the device dimension");
  CMatrix out = CMatrix::Zero(dim, dim);
  out.topLeftCorner(rho.rows(), rho.cols()) = rho;
  return out;
}

RVector frame_phases(const DeviceSpec& device, const PulseSchedule& schedule, double t) {
  RVector th(device.n_levels());
  for (int j = 0; j < device.n_levels(); ++j) th(j) = schedule.frame_phase(device, j, t);
  return th;
}

std::vector<double> clip_samples(std::vector<double> samples, double t1) {
  std::sort(samples.begin(), samples.end());
  samples.erase(std::remove_if(samples.begin(), samples.end(), [&](double s) { return s < 0.0 || s > t1; }),
                samples.end());
  return samples;
}

}  // namespace

void SimulationConfig::validate() const {
  if (!(integrator_rel_tol > 0.0) || !(integrator_abs_tol > 0.0))
    throw ValidationError("integrator tolerances must be positive");
  if (max_step < 0.0) throw ValidationError("max_step must be >= 0");
}

OdeOptions SimulationConfig::ode_options() const {
  OdeOptions o;
  o.rel_tol = integrator_rel_tol;
  o.abs_tol = integrator_abs_tol;
  o.max_step = max_step;
  return o;
}

CMatrix drive_hamiltonian(const DeviceSpec& device, const PulseSchedule& schedule, double t) {
  const int n = device.n_levels();
  double field = 0.0;
  for (const ScheduledTone& st : schedule.tones) {
    const double a = st.amplitude_at(t);
    if (a == 0.0) continue;
    field += a * std::cos(st.carrier_phase(t) + st.tone.phase);
  }
  CMatrix h = field * device.drive_couplings.cast<Complex>();
  for (int j = 0; j < n; ++j) h(j, j) += device.level_freqs(j);
  return h;
}

RwaModel::RwaModel(const DeviceSpec& device, const PulseSchedule& schedule) : device_(&device), schedule_(&schedule) {
  for (std::size_t i = 0; i < schedule.tones.size(); ++i) {
    const ScheduledTone& st = schedule.tones[i];
    const auto [j, k] = st.tone.target;
    if (st.envelope.peak == 0.0) {
      level_shifts_.push_back(RVector::Zero(device.n_levels()));
      continue;
    }
    level_shifts_.push_back(perturbative_shifts(device, st.tone).level_shifts);
    if (st.tone.two_photon) {
      terms_.push_back(Term{i, j, k, 0.5 * two_photon_coupling(device, st.tone), true});
    } else {
      terms_.push_back(Term{i, j, k, 0.5 * device.drive_couplings(j, k) * st.tone.amplitude, false});
    }
  }
}

CMatrix RwaModel::hamiltonian(double t) const {
  const DeviceSpec& device = *device_;
  const PulseSchedule& schedule = *schedule_;
  const int n = device.n_levels();
  CMatrix h = CMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) h(j, j) = device.level_freqs(j) - schedule.frame_frequency(device, j, t);
  for (std::size_t i = 0; i < schedule.tones.size(); ++i) {
    const ScheduledTone& st = schedule.tones[i];
    if (st.envelope.peak == 0.0) continue;
    const double f = st.amplitude_at(t) / st.envelope.peak;
    for (int j = 0; j < n; ++j) h(j, j) += f * f * level_shifts_[i](j);
  }
  for (const Term& term : terms_) {
    const ScheduledTone& st = schedule.tones[term.tone];
    const double f = st.amplitude_at(t) / st.envelope.peak;
    if (f == 0.0) continue;
    const double tone_phase = st.carrier_phase(t) + st.tone.phase;
    const double frame = schedule.frame_phase(device, term.j, t) - schedule.frame_phase(device, term.k, t);
    const Complex el = term.two_photon ? term.weight * f * f * std::exp(kI * (2.0 * tone_phase + frame))
                                       : term.weight * f * std::exp(kI * (tone_phase + frame));
    h(term.j, term.k) += el;
    h(term.k, term.j) += std::conj(el);
  }
  return h;
}

CMatrix rotating_frame(const DeviceSpec& device, const PulseSchedule& schedule, double t) {
  const RVector th = frame_phases(device, schedule, t);
  CVector d(th.size());
  for (Eigen::Index j = 0; j < th.size(); ++j) d(j) = std::exp(kI * th(j));
  return d.asDiagonal();
}

CVector rotating_frame_state(const CVector& psi, const DeviceSpec& device, const PulseSchedule& schedule, double t) {
  return rotating_frame(device, schedule, t) * psi;
}

CMatrix rotating_frame_state(const CMatrix& rho, const DeviceSpec& device, const PulseSchedule& schedule, double t) {
  const CMatrix u = rotating_frame(device, schedule, t);
  return u * rho * u.adjoint();
}

StateTrajectory evolve_schrodinger(const DeviceSpec& device, const PulseSchedule& schedule, const CVector& psi0,
                                   const SimulationConfig& config, const std::vector<double>& sample_times) {
  config.validate();
  schedule.validate(device);
  if (psi0.size() != device.n_levels()) throw ValidationError("initial state dimension differs from the device");
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw ValidationError("initial state must be normalized");

  const double t1 = schedule.total_duration;
  const std::vector<double> samples = clip_samples(sample_times, t1);
  StateTrajectory out;
  const bool rotating = config.frame == Frame::kRotating;
  std::optional<RwaModel> rwa;
  if (rotating) rwa.emplace(device, schedule);

  auto observer = [&](double t, const CVector& y) {
    out.times.push_back(t);
    out.states.push_back(rotating ? CVector(rotating_frame(device, schedule, t).adjoint() * y) : y);
  };
  OdeRhs rhs = [&](double t, const CVector& y, CVector& dy) {
    dy = -kI * ((rotating ? rwa->hamiltonian(t) : drive_hamiltonian(device, schedule, t)) * y);
  };
  CVector y = psi0;
  out.stats = integrate_dopri5(rhs, y, 0.0, t1, samples, observer, config.ode_options());
  out.final_state = rotating ? CVector(rotating_frame(device, schedule, t1).adjoint() * y) : y;
  return out;
}

std::vector<CMatrix> lindblad_operators(const DecoherenceRates& rates, Eigen::Index dim) {
  rates.validate();
  std::vector<CMatrix> ops;
  const Eigen::Index q = std::min<Eigen::Index>(dim, 3);
  for (Eigen::Index i = 0; i < q; ++i) {
    for (Eigen::Index j = 0; j < q; ++j) {
      if (i == j || rates.gamma(i, j) == 0.0) continue;
      CMatrix l = CMatrix::Zero(dim, dim);
      l(j, i) = std::sqrt(rates.gamma(i, j));
      ops.push_back(std::move(l));
    }
  }
  for (Eigen::Index i = 0; i < q; ++i) {
    for (Eigen::Index j = i + 1; j < q; ++j) {
      const double r = rates.dephasing(static_cast<int>(i), static_cast<int>(j));
      if (r == 0.0) continue;
      CMatrix l = CMatrix::Zero(dim, dim);
      l(i, i) = std::sqrt(r);
      l(j, j) = -std::sqrt(r);
      ops.push_back(std::move(l));
    }
  }
  return ops;
}

DensityTrajectory evolve_lindblad(const DeviceSpec& device, const PulseSchedule& schedule, const CMatrix& rho0,
                                  const SimulationConfig& config, const std::vector<double>& sample_times) {
  config.validate();
  schedule.validate(device);
  const Eigen::Index n = device.n_levels();
  if (rho0.rows() != n || rho0.cols() != n) throw ValidationError("initial state dimension differs from the device");
  const DensityValidation v = validate_density(rho0);
  if (!v.accepted()) throw ValidationError("initial state is not physical: " + v.describe());

  const std::vector<CMatrix> ops =
      config.include_decoherence ? lindblad_operators(device.decoherence, n) : std::vector<CMatrix>{};
  CMatrix k_sum = CMatrix::Zero(n, n);
  for (const CMatrix& l : ops) k_sum += l.adjoint() * l;
  const CMatrix anti = -0.5 * k_sum;

  const double t1 = schedule.total_duration;
  const std::vector<double> samples = clip_samples(sample_times, t1);
  const bool rotating = config.frame == Frame::kRotating;
  std::optional<RwaModel> rwa;
  if (rotating) rwa.emplace(device, schedule);

  auto to_lab = [&](double t, const CMatrix& r) -> CMatrix {
    if (!rotating) return r;
    const CMatrix u = rotating_frame(device, schedule, t);
    return u.adjoint() * r * u;
  };

  DensityTrajectory out;
  auto observer = [&](double t, const CVector& y) {
    out.times.push_back(t);
    out.states.push_back(to_lab(t, Eigen::Map<const CMatrix>(y.data(), n, n)));
  };
  OdeRhs rhs = [&](double t, const CVector& y, CVector& dy) {
    const Eigen::Map<const CMatrix> rho(y.data(), n, n);
    const CMatrix h_eff = (rotating ? rwa->hamiltonian(t) : drive_hamiltonian(device, schedule, t)) * (-kI) + anti;
    CMatrix d = h_eff * rho + rho * h_eff.adjoint();
    for (const CMatrix& l : ops) d.noalias() += l * rho * l.adjoint();
    dy = Eigen::Map<const CVector>(d.data(), n * n);
  };
  CVector y = Eigen::Map<const CVector>(rho0.data(), n * n);
  out.stats = integrate_dopri5(rhs, y, 0.0, t1, samples, observer, config.ode_options());
  out.final_state = to_lab(t1, Eigen::Map<const CMatrix>(y.data(), n, n));
  return out;
}

CMatrix evolve_propagator(const DeviceSpec& device, const PulseSchedule& schedule, const SimulationConfig& config) {
  config.validate();
  schedule.validate(device);
  const Eigen::Index n = device.n_levels();
  const bool rotating = config.frame == Frame::kRotating;
  std::optional<RwaModel> rwa;
  if (rotating) rwa.emplace(device, schedule);
  OdeRhs rhs = [&](double t, const CVector& y, CVector& dy) {
    const Eigen::Map<const CMatrix> u(y.data(), n, n);
    const CMatrix h = rotating ? rwa->hamiltonian(t) : drive_hamiltonian(device, schedule, t);
    const CMatrix d = -kI * (h * u);
    dy = Eigen::Map<const CVector>(d.data(), n * n);
  };
  const CMatrix id = CMatrix::Identity(n, n);
  CVector y = Eigen::Map<const CVector>(id.data(), n * n);
  integrate_dopri5(rhs, y, 0.0, schedule.total_duration, {}, {}, config.ode_options());
  CMatrix u = Eigen::Map<const CMatrix>(y.data(), n, n);
  if (rotating) u = rotating_frame(device, schedule, schedule.total_duration).adjoint() * u;
  return u;
}

CMatrix free_decoherence_evolution(const CMatrix& rho0, double duration, const DecoherenceRates& rates) {
  if (!(duration >= 0.0)) throw ValidationError("free evolution duration must be >= 0");
  rates.validate();
  const DensityValidation v = validate_density(rho0);
  if (!v.accepted()) throw ValidationError("initial state is not physical: " + v.describe());
  const Eigen::Index n = rho0.rows();
  const Eigen::Index q = std::min<Eigen::Index>(n, 3);
  if (duration == 0.0) return rho0;

  // R: populations follow the rate equation, coherences decay at half the
  // summed escape rates.
  RMatrix m = RMatrix::Zero(n, n);
  RVector escape = RVector::Zero(n);
  for (Eigen::Index i = 0; i < q; ++i) {
    for (Eigen::Index j = 0; j < q; ++j) {
      if (i == j) continue;
      m(j, i) += rates.gamma(i, j);
      m(i, i) -= rates.gamma(i, j);
      escape(i) += rates.gamma(i, j);
    }
  }
  const RMatrix prop = (m * duration).exp();
  RVector p(n);
  for (Eigen::Index i = 0; i < n; ++i) p(i) = rho0(i, i).real();
  const RVector p_new = prop * p;

  CMatrix out = rho0;
  for (Eigen::Index i = 0; i < n; ++i) {
    out(i, i) = p_new(i);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      double c = std::exp(-0.5 * (escape(i) + escape(j)) * duration);
      if (i < q && j < q) {
        const double g = rates.dephasing(static_cast<int>(i), static_cast<int>(j)) * duration;
        c *= rates.coherence_shape == CoherenceShape::kGaussian ? std::exp(-g * g) : std::exp(-g);
      }
      out(i, j) = c * rho0(i, j);
    }
  }
  return out;
}

PhysicalityReport check_physical(const CMatrix& rho) {
  PhysicalityReport r;
  r.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
  r.hermiticity_error = linalg::hermiticity_error(rho);
  const CMatrix h = 0.5 * (rho + rho.adjoint());
  r.min_eigenvalue = linalg::hermitian_eig(h).values.minCoeff();
  return r;
}

double qutrit_state_fidelity(const CMatrix& rho, const CMatrix& sigma) {
  const CMatrix a = rho.topLeftCorner(3, 3);
  const CMatrix b = sigma.topLeftCorner(3, 3);
  const double f = root_fidelity(0.5 * (a + a.adjoint()), 0.5 * (b + b.adjoint()));
  return std::clamp(f * f, 0.0, 1.0);
}

// ----------------------------------------------------------------------------

CMatrix pulsed_sequence_unitary(const DeviceSpec& device, const std::vector<RotationStep>& steps,
                                const PulsedRotationConfig& pulse, const SimulationConfig& config) {
  const Eigen::Index n = device.n_levels();
  const double eff = pulse.flat + 0.5 * (pulse.rise + pulse.fall);
  if (!(eff > 0.0)) throw ValidationError("rotation pulse has zero area");
  CMatrix total = CMatrix::Identity(n, n);
  for (const RotationStep& r : steps) {
    int j = std::min(r.j, r.k);
    int k = std::max(r.j, r.k);
    double alpha = r.j < r.k ? r.alpha : -r.alpha;
    double theta = r.theta;
    if (theta == 0.0) continue;
    if (theta < 0.0) {
      theta = -theta;
      alpha += kPi;
    }
    const double g = device.drive_couplings(j, k);
    if (g == 0.0) throw ModelValidityError("rotation on a transition with zero drive coupling");
    ToneSpec tone{theta / eff / std::abs(g), device.transition_freq(j, k), -alpha + (g < 0.0 ? kPi : 0.0), {j, k}, false};
    PulseSchedule s;
    s.tones.push_back(make_tone(tone, pulse.rise, pulse.flat, pulse.fall));
    s.total_duration = pulse.rise + pulse.flat + pulse.fall;
    const CMatrix u_lab = evolve_propagator(device, s, config);
    total = rotating_frame(device, s, s.total_duration) * u_lab * total;
  }
  return total;
}

GateSequenceResult simulate_gate_sequence(const DeviceSpec& device, const CMatrix& preparation,
                                          const PulseSchedule& schedule, const std::vector<CMatrix>& analyzers,
                                          const SimulationConfig& config, const GateSequenceOptions& options) {
  const Eigen::Index n = device.n_levels();
  const CMatrix rho0 = options.initial_state ? embed_state(*options.initial_state, n)
                                             : thermal_state(device.readout.thermal_p0, n).matrix();
  const CMatrix prep = embed(preparation, n);
  if (linalg::unitarity_error(prep) > 1e-9) throw ValidationError("preparation is not unitary");
  const CMatrix rho_in = prep * rho0 * prep.adjoint();

  GateSequenceResult out;
  CMatrix rho = rho_in;
  if (schedule.total_duration > 0.0) {
    const DensityTrajectory traj = evolve_lindblad(device, schedule, rho_in, config);
    out.stats = traj.stats;
    rho = rotating_frame_state(traj.final_state, device, schedule, schedule.total_duration);
  }
  if (options.virtual_phases) {
    CMatrix ud = CMatrix::Identity(n, n);
    for (int j = 0; j < 3; ++j) ud(j, j) = std::exp(-kI * (*options.virtual_phases)[static_cast<std::size_t>(j)]);
    rho = ud * rho * ud.adjoint();
  }
  out.final_state = rho;
  out.physicality = check_physical(rho);

  if (options.analyzer_mode == AnalyzerMode::kPulsed && options.analyzer_steps.size() != analyzers.size())
    throw ValidationError("pulsed analyzers need one rotation sequence per analyzer");
  const CMatrix vop = device.readout.voltage_operator(n);
  for (std::size_t i = 0; i < analyzers.size(); ++i) {
    const CMatrix u = options.analyzer_mode == AnalyzerMode::kPulsed
                          ? pulsed_sequence_unitary(device, options.analyzer_steps[i], options.analyzer_pulse, config)
                          : embed(analyzers[i], n);
    out.voltages.push_back((u * rho * u.adjoint() * vop).trace().real());
  }
  return out;
}

// ----------------------------------------------------------------------------

OscillationFit fit_oscillation(const std::vector<double>& times, const std::vector<double>& values) {
  const std::size_t n = times.size();
  if (n < 5 || values.size() != n) throw ValidationError("oscillation fit needs at least 5 matching samples");
  const double span = times.back() - times.front();
  if (!(span > 0.0)) throw ValidationError("oscillation fit needs increasing times");

  auto solve = [&](double w, Eigen::Vector3d* coef) {
    Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
    Eigen::Vector3d atb = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::Vector3d row(1.0, std::cos(w * times[i]), std::sin(w * times[i]));
      ata += row * row.transpose();
      atb += row * values[i];
    }
    const Eigen::Vector3d c = ata.ldlt().solve(atb);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = values[i] - c(0) - c(1) * std::cos(w * times[i]) - c(2) * std::sin(w * times[i]);
      ss += r * r;
    }
    if (coef) *coef = c;
    return ss;
  };

  const double w_lo = kPi / span;
  const double w_hi = kPi * static_cast<double>(n - 1) / span;
  const int grid = std::max<int>(400, static_cast<int>(8 * n));
  const double step = (w_hi - w_lo) / grid;
  double best_w = w_lo;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= grid; ++i) {
    const double w = w_lo + step * i;
    const double ss = solve(w, nullptr);
    if (ss < best) {
      best = ss;
      best_w = w;
    }
  }
  const auto [w, ss] = boost::math::tools::brent_find_minima([&](double x) { return solve(x, nullptr); },
                                                             std::max(w_lo, best_w - step), best_w + step, 40);
  Eigen::Vector3d c;
  solve(w, &c);
  OscillationFit fit;
  fit.omega = w;
  fit.offset = c(0);
  fit.amplitude = std::hypot(c(1), c(2));
  fit.phase = std::atan2(-c(2), c(1));
  fit.rms_residual = std::sqrt(ss / static_cast<double>(n));
  return fit;
}

void write_trajectory_csv(std::ostream& out, const std::vector<double>& times, const std::vector<CMatrix>& states) {
  if (times.size() != states.size()) throw ValidationError("trajectory times and states differ in length");
  out << kTrajectoryCsvHeader << '\n';
  out << std::setprecision(12);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const CMatrix& r = states[i];
    if (r.rows() < 3) throw ValidationError("trajectory export needs at least 3 levels");
    out << times[i] << ',' << r(0, 0).real() << ',' << r(1, 1).real() << ',' << r(2, 2).real() << ','
        << r(0, 1).real() << ',' << r(0, 1).imag() << ',' << r(0, 2).real() << ',' << r(0, 2).imag() << ','
        << r(1, 2).real() << ',' << r(1, 2).imag() << '\n';
  }
}

}  // namespace qutrit
