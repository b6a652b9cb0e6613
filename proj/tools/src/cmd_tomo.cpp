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

#include <fstream>
#include <iomanip>
#include <memory>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "pipeline.hpp"
#include "qutrit/tomography.hpp"

namespace qutrit::cli {
namespace {

struct TomoFlags {
  std::string profile;
  std::string out;
  std::string mode = "state";
  std::string records;
  bool self_generate = false;
  std::string write_records;
  int prep = 0;
  std::optional<double> noise_mv;
  std::uint64_t seed = 1;
  std::string likelihood = "l1";
  int restarts = 0;
  GateFlags gate;
};

/// Simulated voltages for the given preparations, one record per analyzer.
std::vector<VoltageRecord> generate_records(const DeviceSpec& device, const GatePlan& plan, const AnalyzerSet& preps,
                                            const std::vector<int>& which, const std::vector<CMatrix>& analyzers,
                                            std::uint64_t seed, int workers) {
  std::vector<CMatrix> finals(which.size());
  parallel_for(static_cast<int>(which.size()), workers, [&](int i) {
    GateSequenceOptions o;
    o.initial_state = plan.initial_state;
    o.virtual_phases = plan.virtual_phases;
    const CMatrix p = preps.pulses[static_cast<std::size_t>(which[static_cast<std::size_t>(i)])].unitary();
    finals[static_cast<std::size_t>(i)] = simulate_gate_sequence(device, p, plan.schedule, {}, plan.config, o).final_state;
  });
  std::vector<VoltageRecord> out;
  for (std::size_t i = 0; i < which.size(); ++i) {
    const CMatrix rho = finals[i].topLeftCorner(3, 3);
    for (std::size_t a = 0; a < analyzers.size(); ++a) {
      const std::uint64_t s = seed * 1000003ULL + static_cast<std::uint64_t>(which[i]) * 97ULL + a;
      out.push_back({which[i], static_cast<int>(a), simulate_homodyne(rho, analyzers[a], device.readout, true, s)});
    }
  }
  return out;
}

std::vector<VoltageRecord> read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open records file '" + path + "'");
  return read_records_csv(in);
}

void write_comparison(std::ostream& os, const CMatrix& est, const CMatrix& ideal) {
  os << "row,col,re,im,ideal_re,ideal_im,diff_re,diff_im\n";
  for (Eigen::Index r = 0; r < est.rows(); ++r)
    for (Eigen::Index c = 0; c < est.cols(); ++c) {
      const Complex e = est(r, c);
      const Complex i = ideal(r, c);
      os << r << ',' << c << ',' << e.real() << ',' << e.imag() << ',' << i.real() << ',' << i.imag() << ','
         << (e - i).real() << ',' << (e - i).imag() << '\n';
    }
}

void run_tomo(const TomoFlags& f, const Context& ctx) {
  DeviceSpec device = resolve_device(f.profile);
  if (f.noise_mv) {
    if (*f.noise_mv < 0.0) throw ValidationError("--noise-mv must be >= 0");
    device.readout.noise_sigma = *f.noise_mv * 1e-3;
  }
  if (f.mode != "state" && f.mode != "process") throw ValidationError("--mode must be state or process");
  if (f.self_generate == !f.records.empty()) throw ValidationError("give exactly one of --records and --self-generate");
  if (f.likelihood != "l1" && f.likelihood != "l2") throw ValidationError("--likelihood must be l1 or l2");
  const bool process = f.mode == "process";

  const AnalyzerSet preps = state_preparations();
  const int n_preps = static_cast<int>(preps.pulses.size());
  if (!process && (f.prep < 0 || f.prep >= n_preps))
    throw ValidationError("--prep must be in 0.." + std::to_string(n_preps - 1));
  const std::vector<CMatrix> analyzers = tomography_analyzers().unitaries();
  const int n_an = static_cast<int>(analyzers.size());
  std::vector<int> which;
  if (process) {
    for (int p = 0; p < n_preps; ++p) which.push_back(p);
  } else {
    which.push_back(f.prep);
  }

  const GatePlan plan = plan_gate(device, f.gate);
  std::ostringstream config;
  config << device_config(device) << gate_config(f.gate) << "mode=" << f.mode << "\nrecords=" << f.records
         << "\nself_generate=" << f.self_generate << "\nprep=" << f.prep << "\nlikelihood=" << f.likelihood
         << "\nrestarts=" << f.restarts << '\n';
  const Manifest manifest{ctx.command_line, config.str(), f.seed};

  std::vector<VoltageRecord> records = f.self_generate
                                           ? generate_records(device, plan, preps, which, analyzers, f.seed, ctx.workers)
                                           : read_records(f.records);
  if (!f.write_records.empty()) {
    std::ofstream os(f.write_records);
    if (!os) throw ValidationError("cannot write '" + f.write_records + "'");
    manifest.write(os);
    write_records_csv(os, records);
  }

  Sink sink(ctx, f.out);
  std::ostream& os = sink.stream();
  if (!process) {
    std::vector<double> v(static_cast<std::size_t>(n_an));
    std::set<int> seen;
    for (const VoltageRecord& r : records) {
      if (r.prep_index != f.prep) continue;
      if (r.analyzer_index < 0 || r.analyzer_index >= n_an)
        throw ValidationError("record analyzer index " + std::to_string(r.analyzer_index) + " is out of range");
      if (!seen.insert(r.analyzer_index).second)
        throw ValidationError("duplicate record (" + std::to_string(f.prep) + "," + std::to_string(r.analyzer_index) + ")");
      v[static_cast<std::size_t>(r.analyzer_index)] = r.voltage;
    }
    if (static_cast<int>(seen.size()) != n_an) {
      std::string missing;
      for (int a = 0; a < n_an; ++a)
        if (!seen.count(a)) missing += " (" + std::to_string(f.prep) + "," + std::to_string(a) + ")";
      throw ValidationError("missing records (prep, analyzer):" + missing);
    }
    StateMleOptions o;
    o.likelihood = f.likelihood == "l1" ? Likelihood::kL1 : Likelihood::kL2;
    o.seed = f.seed;
    if (f.restarts > 0) o.restarts = f.restarts;
    const StateEstimate est = mle_state(v, analyzers, device.readout, o);
    const CMatrix rho_in = prepared_state(device, plan, preps.pulses[static_cast<std::size_t>(f.prep)].unitary());
    const CMatrix ideal = plan.ideal * rho_in * plan.ideal.adjoint();
    manifest.write(os);
    os << std::setprecision(10) << "# fidelity: " << qutrit_state_fidelity(est.rho.matrix(), ideal) << '\n'
       << "# objective: " << est.objective << "\n# iterations: " << est.iterations << '\n';
    write_comparison(os, est.rho.matrix(), ideal);
    return;
  }

  const RMatrix m = assemble_records(records, n_preps, n_an);
  const std::vector<CMatrix> prep_u = preps.unitaries();
  const OperatorBasis basis = build_operator_basis();
  const CMatrix nominal = plan.initial_state ? *plan.initial_state : thermal_state(device.readout.thermal_p0).matrix();
  ProcessMleOptions o;
  o.seed = f.seed;
  if (f.restarts > 0) o.restarts = f.restarts;
  const ProcessEstimate est = process_mle(m, prep_u, analyzers, device.readout, basis, nominal, o);
  const ProcessMatrix ideal = ideal_chi(UnitaryOperator(plan.ideal), basis);
  manifest.write(os);
  os << std::setprecision(10) << "# process_fidelity: " << process_fidelity(est.process, ideal) << '\n'
     << "# objective: " << est.objective << "\n# iterations: " << est.iterations << '\n';
  write_comparison(os, est.process.chi, ideal.chi);
}

}  // namespace

Action add_tomo(CLI::App& app) {
  auto f = std::make_shared<TomoFlags>();
  CLI::App* sub = app.add_subcommand("tomo", "State or process reconstruction from homodyne records");
  sub->add_option("--profile", f->profile, "Device profile (default: built-in flux qutrit)");
  sub->add_option("--mode", f->mode, "state or process")->capture_default_str();
  sub->add_option("--records", f->records, "Records CSV (prep_index,analyzer_index,voltage_volts)");
  sub->add_flag("--self-generate", f->self_generate, "Simulate the gate and generate the records");
  sub->add_option("--write-records", f->write_records, "Also save the records used to this file");
  sub->add_option("--prep", f->prep, "State mode: preparation index")->capture_default_str();
  sub->add_option("--noise-mv", f->noise_mv, "Readout noise sigma, mV (default: profile)");
  sub->add_option("--seed", f->seed, "Noise and restart seed")->capture_default_str();
  sub->add_option("--likelihood", f->likelihood, "State mode: l1 or l2")->capture_default_str();
  sub->add_option("--restarts", f->restarts, "Optimizer restarts (0: default)")->capture_default_str();
  add_gate_flags(*sub, f->gate);
  sub->add_option("--out", f->out, "Write the report to this file instead of stdout");
  return [f](const Context& ctx) { run_tomo(*f, ctx); };
}

}  // namespace qutrit::cli
