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
#include <iomanip>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "qutrit/drive_model.hpp"

namespace qutrit::cli {
namespace {

constexpr double kMHz = kTwoPi * 1e6;
constexpr double kGHz = kTwoPi * 1e9;

struct ShiftsFlags {
  std::string profile;
  std::string out;
  std::string pair = "02";
  std::string photons = "auto";
  double amplitude = 1.0;
  std::optional<double> carrier_ghz;
  double detuning_mhz = 50.0;
  double phase = 0.0;
  int blocks = 0;
  bool no_numeric = false;
  bool sweep = false;
  std::string delta01 = "-30:30:61";
  std::string delta02 = "-60:60:25";
  double probe_amplitude = 0.05;
  std::string mode = "perturbative";
};

std::pair<int, int> parse_pair(const std::string& s, int n_levels) {
  if (s.size() != 2 || s[0] < '0' || s[0] > '9' || s[1] < '0' || s[1] > '9')
    throw ValidationError("--pair must look like 01, 12 or 02");
  const int j = s[0] - '0';
  const int k = s[1] - '0';
  if (j >= k || k >= n_levels) throw ValidationError("--pair " + s + ": need j < k < number of levels");
  return {j, k};
}

/// Tone on `pair`, detuned by delta (resonance minus drive) or at an explicit carrier.
ToneSpec make_probe_tone(const DeviceSpec& device, const ShiftsFlags& f) {
  ToneSpec t;
  t.target = parse_pair(f.pair, device.n_levels());
  const auto [j, k] = t.target;
  if (f.photons == "auto") {
    t.two_photon = device.drive_couplings(j, k) == 0.0;
  } else if (f.photons == "one" || f.photons == "two") {
    t.two_photon = f.photons == "two";
  } else {
    throw ValidationError("--photons must be auto, one or two");
  }
  const double resonance = device.transition_freq(j, k) / (t.two_photon ? 2.0 : 1.0);
  t.carrier_freq = f.carrier_ghz ? *f.carrier_ghz * kGHz : resonance - f.detuning_mhz * kMHz;
  t.amplitude = f.amplitude;
  t.phase = f.phase;
  t.validate(device);
  return t;
}

std::string relative(double p, double n) {
  if (std::abs(p) < 1e-9 && std::abs(n) < 1e-9) return "0";
  std::ostringstream s;
  s << std::setprecision(6) << std::abs(p - n) / std::max(std::abs(n), std::abs(p));
  return s.str();
}

void run_report(const ShiftsFlags& f, const DeviceSpec& device, const Context& ctx) {
  const ToneSpec tone = make_probe_tone(device, f);
  const ShiftReport pert = perturbative_shifts(device, tone);
  std::optional<ShiftReport> num;
  std::optional<AnticrossingGap> gap;
  const int blocks = f.blocks > 0 ? f.blocks : default_dressed_blocks(device.n_levels());
  if (!f.no_numeric) {
    NumericShiftOptions o;
    o.blocks = blocks;
    o.anticrossing_gap = false;
    num = numeric_shifts(device, tone, o);
    if (tone.two_photon && tone.amplitude > 0.0) {
      ToneSpec resonant = tone;
      const auto [j, k] = tone.target;
      resonant.carrier_freq = 0.5 * (device.transition_freq(j, k) + pert.transition(j, k));
      gap = dressed_anticrossing_gap(device, resonant, blocks, o.gap_search_halfwidth);
    }
  }
  if (!pert.perturbative_valid)
    ctx.err << "warning: coupling ratio " << pert.coupling_ratio << " exceeds " << kPerturbativeRatioLimit
            << "; perturbative sums are outside their validity range\n";
  if (num && num->tracking_ambiguous)
    ctx.err << "warning: dressed-level tracking is ambiguous at this carrier; numeric shifts are unreliable\n";

  std::ostringstream config;
  config << std::setprecision(17) << device_config(device) << "pair=" << f.pair << "\ntwo_photon=" << tone.two_photon
         << "\namplitude=" << tone.amplitude << "\ncarrier=" << tone.carrier_freq << "\nphase=" << tone.phase
         << "\nblocks=" << blocks << "\nnumeric=" << !f.no_numeric << '\n';
  Sink sink(ctx, f.out);
  std::ostream& os = sink.stream();
  Manifest{ctx.command_line, config.str(), 0}.write(os);
  os << std::setprecision(10) << "# carrier_ghz: " << tone.carrier_freq / kGHz << '\n'
     << "# coupling_ratio: " << pert.coupling_ratio << '\n'
     << "# perturbative_valid: " << (pert.perturbative_valid ? "true" : "false") << '\n'
     << "# tracking_ambiguous: " << (num && num->tracking_ambiguous ? "true" : "false") << '\n';
  os << "quantity,perturbative_mhz,numeric_mhz,relative_deviation\n";
  auto row = [&](const std::string& name, double p, std::optional<double> n) {
    os << name << ',' << p / kMHz << ',';
    if (n) {
      os << *n / kMHz << ',' << relative(p, *n);
    } else {
      os << ',';
    }
    os << '\n';
  };
  const int nl = device.n_levels();
  for (int j = 0; j < nl; ++j) row("ac_stark_" + std::to_string(j), pert.ac_stark(j), std::nullopt);
  for (int j = 0; j < nl; ++j) row("bloch_siegert_" + std::to_string(j), pert.bloch_siegert(j), std::nullopt);
  for (int j = 0; j < nl; ++j)
    row("level_" + std::to_string(j), pert.level_shifts(j), num ? std::optional(num->level_shifts(j)) : std::nullopt);
  for (int j = 0; j < std::min(nl, 3); ++j)
    for (int k = j + 1; k < std::min(nl, 3); ++k)
      row("transition_" + std::to_string(j) + std::to_string(k), pert.transition(j, k),
          num ? std::optional(num->transition(j, k)) : std::nullopt);
  if (tone.two_photon) row("two_photon_rabi", pert.two_photon_rabi, gap ? std::optional(gap->gap) : std::nullopt);
}

void run_sweep(const ShiftsFlags& f, const DeviceSpec& device, const Context& ctx) {
  const std::vector<double> d01 = parse_range(f.delta01);
  const std::vector<double> d02 = parse_range(f.delta02);
  if (device.n_levels() < 3) throw ValidationError("the sweep needs at least three levels");
  if (device.drive_couplings(0, 1) == 0.0) throw ValidationError("the sweep probes 0-1 but the profile has no 0-1 coupling");
  if (f.mode != "perturbative" && f.mode != "numeric") throw ValidationError("--shift-mode must be perturbative or numeric");
  const bool numeric = f.mode == "numeric";
  const double probe_rabi = f.probe_amplitude * device.drive_couplings(0, 1);

  struct Column {
    double shift01 = 0.0;
    bool ambiguous = false;
  };
  std::vector<Column> cols(d02.size());
  parallel_for(static_cast<int>(d02.size()), ctx.workers, [&](int i) {
    ToneSpec t;
    t.amplitude = f.amplitude;
    t.phase = f.phase;
    t.target = {0, 2};
    t.two_photon = device.drive_couplings(0, 2) == 0.0;
    t.carrier_freq = device.transition_freq(0, 2) / (t.two_photon ? 2.0 : 1.0) - d02[static_cast<std::size_t>(i)] * kMHz;
    ShiftReport r;
    if (numeric) {
      NumericShiftOptions o;
      o.blocks = f.blocks;
      o.anticrossing_gap = false;
      r = numeric_shifts(device, t, o);
    } else {
      r = perturbative_shifts(device, t);
    }
    cols[static_cast<std::size_t>(i)] = {r.transition(0, 1), r.tracking_ambiguous};
  });

  std::ostringstream config;
  config << std::setprecision(17) << device_config(device) << "amplitude=" << f.amplitude << "\nphase=" << f.phase
         << "\ndelta01=" << f.delta01 << "\ndelta02=" << f.delta02 << "\nprobe_amplitude=" << f.probe_amplitude
         << "\nmode=" << f.mode << "\nblocks=" << f.blocks << '\n';
  Sink sink(ctx, f.out);
  std::ostream& os = sink.stream();
  Manifest{ctx.command_line, config.str(), 0}.write(os);
  os << "delta02_mhz,delta01_mhz,shift01_mhz,rabi01_mhz,tracking_ambiguous\n" << std::setprecision(10);
  for (std::size_t i = 0; i < d02.size(); ++i) {
    for (double d : d01) {
      const double detuning = -d * kMHz - cols[i].shift01;
      os << d02[i] << ',' << d << ',' << cols[i].shift01 / kMHz << ',' << std::hypot(probe_rabi, detuning) / kMHz << ','
         << (cols[i].ambiguous ? 1 : 0) << '\n';
    }
  }
}

}  // namespace

Action add_shifts(CLI::App& app) {
  auto f = std::make_shared<ShiftsFlags>();
  CLI::App* sub = app.add_subcommand("shifts", "Drive-induced level shifts, perturbative and dressed-state");
  sub->add_option("--profile", f->profile, "Device profile (default: built-in flux qutrit)");
  sub->add_option("--pair", f->pair, "Target transition jk")->capture_default_str();
  sub->add_option("--photons", f->photons, "auto, one or two")->capture_default_str();
  sub->add_option("--amplitude", f->amplitude, "Drive amplitude")->capture_default_str();
  auto* carrier = sub->add_option("--carrier-ghz", f->carrier_ghz, "Carrier frequency / 2pi in GHz");
  sub->add_option("--detuning-mhz", f->detuning_mhz, "Resonance minus carrier, MHz")->capture_default_str()->excludes(carrier);
  sub->add_option("--phase", f->phase, "Tone phase, rad")->capture_default_str();
  sub->add_option("--blocks", f->blocks, "Photon blocks of the dressed Hamiltonian (0: automatic)")->capture_default_str();
  sub->add_flag("--no-numeric", f->no_numeric, "Skip the dressed-state diagonalization");
  sub->add_flag("--sweep", f->sweep, "0-1 Rabi rate on a (delta01, delta02) grid under a 0-2 drive");
  sub->add_option("--delta01-mhz", f->delta01, "Sweep: 0-1 probe detuning range a:b:n")->capture_default_str();
  sub->add_option("--delta02-mhz", f->delta02, "Sweep: 0-2 drive detuning range a:b:n")->capture_default_str();
  sub->add_option("--probe-amplitude", f->probe_amplitude, "Sweep: 0-1 probe amplitude")->capture_default_str();
  sub->add_option("--shift-mode", f->mode, "Sweep: perturbative or numeric")->capture_default_str();
  sub->add_option("--out", f->out, "Write the table to this file instead of stdout");
  return [f](const Context& ctx) {
    const DeviceSpec device = resolve_device(f->profile);
    if (f->sweep) {
      run_sweep(*f, device, ctx);
    } else {
      run_report(*f, device, ctx);
    }
  };
}

}  // namespace qutrit::cli
