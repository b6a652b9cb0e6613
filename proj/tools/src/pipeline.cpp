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

#include "pipeline.hpp"

#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "qutrit_cli/io.hpp"

namespace qutrit::cli {

UnitaryOperator resolve_target(const std::string& target) {
  if (target == "wh" || target == "walsh-hadamard") return walsh_hadamard();
  if (target == "identity") return UnitaryOperator(CMatrix::Identity(3, 3));
  const CMatrix m = load_matrix(target);
  if (m.rows() != 3)
    throw ValidationError(target + ": expected a 3x3 matrix, got " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()));
  return UnitaryOperator(m);
}

void add_gate_flags(CLI::App& sub, GateFlags& f) {
  sub.add_option("--gate", f.gate, "wh, identity, or a matrix file")->capture_default_str();
  sub.add_option("--rise-ns", f.rise_ns, "Envelope rise time, ns")->capture_default_str();
  sub.add_option("--flat-ns", f.flat_ns, "Envelope flat top, ns")->capture_default_str();
  sub.add_option("--fall-ns", f.fall_ns, "Envelope fall time, ns")->capture_default_str();
  sub.add_option("--duration-ns", f.duration_ns, "Total gate time, ns; rescales rise, flat and fall together");
  sub.add_flag("--no-decoherence", f.no_decoherence, "Closed-system evolution");
  sub.add_flag("--no-compensation", f.no_compensation, "Keep carriers and frames at the bare frequencies");
  sub.add_option("--shift-mode", f.shift_mode, "perturbative or numeric (two-photon tone)")->capture_default_str();
  sub.add_option("--amplitude-scale", f.amplitude_scale, "Scale every tone amplitude")->capture_default_str();
  sub.add_option("--phase02-offset", f.phase02_offset, "Added to the 0-2 tone phase, rad")->capture_default_str();
  sub.add_option("--rtol", f.rtol, "Integrator relative tolerance")->capture_default_str();
  sub.add_option("--atol", f.atol, "Integrator absolute tolerance")->capture_default_str();
  sub.add_option("--max-step-ns", f.max_step_ns, "Integrator step cap, ns (0: none)")->capture_default_str();
  sub.add_option("--initial", f.initial, "thermal or ground")->capture_default_str();
}

std::string gate_config(const GateFlags& f) {
  std::ostringstream s;
  s << std::setprecision(17) << "gate=" << f.gate << "\nrise_ns=" << f.rise_ns << "\nflat_ns=" << f.flat_ns
    << "\nfall_ns=" << f.fall_ns << "\nduration_ns=" << (f.duration_ns ? std::to_string(*f.duration_ns) : "-")
    << "\ndecoherence=" << !f.no_decoherence << "\ncompensation=" << !f.no_compensation
    << "\nshift_mode=" << f.shift_mode << "\namplitude_scale=" << f.amplitude_scale
    << "\nphase02_offset=" << f.phase02_offset << "\nrtol=" << f.rtol << "\natol=" << f.atol
    << "\nmax_step_ns=" << f.max_step_ns << "\ninitial=" << f.initial << '\n';
  return s.str();
}

GatePlan plan_gate(const DeviceSpec& device, const GateFlags& f, double extra_phase02) {
  GatePlan plan;
  plan.config.include_decoherence = !f.no_decoherence;
  plan.config.integrator_rel_tol = f.rtol;
  plan.config.integrator_abs_tol = f.atol;
  plan.config.max_step = f.max_step_ns * 1e-9;
  plan.config.validate();

  if (f.initial == "ground") {
    plan.initial_state = CMatrix::Zero(3, 3);
    (*plan.initial_state)(0, 0) = 1.0;
  } else if (f.initial != "thermal") {
    throw ValidationError("--initial must be thermal or ground");
  }

  double rise = f.rise_ns, flat = f.flat_ns, fall = f.fall_ns;
  if (rise < 0.0 || flat < 0.0 || fall < 0.0) throw ValidationError("envelope times must be >= 0");
  if (f.duration_ns) {
    if (*f.duration_ns < 0.0) throw ValidationError("--duration-ns must be >= 0");
    const double total = rise + flat + fall;
    if (total <= 0.0 && *f.duration_ns > 0.0) throw ValidationError("--duration-ns needs a nonzero envelope shape");
    const double s = total > 0.0 ? *f.duration_ns / total : 0.0;
    rise *= s;
    flat *= s;
    fall *= s;
  }

  plan.decomposition = select_decomposition([&] {
    auto found = search_decompositions(resolve_target(f.gate));
    if (found.empty()) throw NumericalError("no decomposition of the target gate was found");
    return found;
  }());
  plan.ideal = ideal_gate(plan.decomposition);

  if (rise + flat + fall == 0.0) return plan;
  const GateDecomposition& d = plan.decomposition;
  if (std::abs(d.m01) + std::abs(d.m12) + std::abs(d.m02) < 1e-12) {
    plan.virtual_phases = d.phases;
    return plan;
  }

  if (f.shift_mode != "perturbative" && f.shift_mode != "numeric")
    throw ValidationError("--shift-mode must be perturbative or numeric");
  GateScheduleOptions o;
  o.rise = rise * 1e-9;
  o.flat = flat * 1e-9;
  o.fall = fall * 1e-9;
  o.compensate = !f.no_compensation;
  o.compensation.mode = f.shift_mode == "numeric" ? ShiftMode::kNumeric : ShiftMode::kPerturbative;
  o.phase02_offset = f.phase02_offset + extra_phase02;
  o.amplitude_scale = f.amplitude_scale;
  plan.schedule = build_gate_schedule(device, plan.decomposition, o).schedule;
  plan.virtual_phases = plan.decomposition.phases;
  return plan;
}

CMatrix prepared_state(const DeviceSpec& device, const GatePlan& plan, const CMatrix& prep) {
  const CMatrix rho0 = plan.initial_state ? *plan.initial_state : thermal_state(device.readout.thermal_p0).matrix();
  return prep * rho0 * prep.adjoint();
}

}  // namespace qutrit::cli
