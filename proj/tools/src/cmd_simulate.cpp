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
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "pipeline.hpp"
#include "qutrit/tomography.hpp"

namespace qutrit::cli {
namespace {

struct SimulateFlags {
  std::string profile;
  std::string out;
  std::string preparations = "all";
  std::string sweep_phase02;
  std::string trajectories;
  std::string states;
  int samples = 141;
  GateFlags gate;
};

std::vector<int> parse_preparations(const std::string& text, int n) {
  std::vector<int> out;
  if (text == "all") {
    out.resize(static_cast<std::size_t>(n));
    std::iota(out.begin(), out.end(), 0);
    return out;
  }
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const long i = std::strtol(item.c_str(), &end, 10);
    if (end == item.c_str() || *end != '\0' || i < 0 || i >= n)
      throw ValidationError("--preparations: '" + item + "' is not an index in 0.." + std::to_string(n - 1));
    out.push_back(static_cast<int>(i));
  }
  if (out.empty()) throw ValidationError("--preparations is empty");
  return out;
}

struct PrepResult {
  double fidelity = 0.0;
  GateSequenceResult run;
};

std::vector<PrepResult> run_preparations(const DeviceSpec& device, const GatePlan& plan, const AnalyzerSet& preps,
                                         const std::vector<int>& which, int workers) {
  std::vector<PrepResult> out(which.size());
  parallel_for(static_cast<int>(which.size()), workers, [&](int i) {
    const CMatrix p = preps.pulses[static_cast<std::size_t>(which[static_cast<std::size_t>(i)])].unitary();
    GateSequenceOptions o;
    o.initial_state = plan.initial_state;
    o.virtual_phases = plan.virtual_phases;
    PrepResult& r = out[static_cast<std::size_t>(i)];
    r.run = simulate_gate_sequence(device, p, plan.schedule, {}, plan.config, o);
    const CMatrix rho_in = prepared_state(device, plan, p);
    r.fidelity = qutrit_state_fidelity(r.run.final_state, plan.ideal * rho_in * plan.ideal.adjoint());
  });
  return out;
}

std::pair<double, double> mean_spread(const std::vector<PrepResult>& r) {
  double sum = 0.0, sq = 0.0;
  for (const PrepResult& x : r) sum += x.fidelity;
  const double mean = sum / static_cast<double>(r.size());
  for (const PrepResult& x : r) sq += (x.fidelity - mean) * (x.fidelity - mean);
  return {mean, r.size() > 1 ? std::sqrt(sq / static_cast<double>(r.size() - 1)) : 0.0};
}

void write_trajectories(const DeviceSpec& device, const GatePlan& plan, const AnalyzerSet& preps,
                        const std::vector<int>& which, int samples, const std::string& dir, const Manifest& manifest,
                        int workers) {
  if (samples < 2) throw ValidationError("--samples must be at least 2");
  std::filesystem::create_directories(dir);
  const double T = plan.schedule.total_duration;
  std::vector<double> times(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) times[static_cast<std::size_t>(i)] = T * i / (samples - 1);
  parallel_for(static_cast<int>(which.size()), workers, [&](int i) {
    const int p = which[static_cast<std::size_t>(i)];
    const CMatrix rho_in = prepared_state(device, plan, preps.pulses[static_cast<std::size_t>(p)].unitary());
    std::vector<CMatrix> states;
    if (T > 0.0) {
      const DensityTrajectory traj = evolve_lindblad(device, plan.schedule, rho_in, plan.config, times);
      for (std::size_t s = 0; s < traj.times.size(); ++s)
        states.push_back(rotating_frame_state(traj.states[s], device, plan.schedule, traj.times[s]));
    } else {
      states.assign(times.size(), rho_in);
    }
    const std::string path = (std::filesystem::path(dir) / ("prep_" + std::to_string(p) + ".csv")).string();
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot write '" + path + "'");
    manifest.write(os);
    write_trajectory_csv(os, times, states);
  });
}

void run_simulate(const SimulateFlags& f, const Context& ctx) {
  const DeviceSpec device = resolve_device(f.profile);
  const AnalyzerSet preps = state_preparations();
  const std::vector<int> which = parse_preparations(f.preparations, static_cast<int>(preps.pulses.size()));

  std::ostringstream config;
  config << device_config(device) << gate_config(f.gate) << "preparations=" << f.preparations
         << "\nsweep_phase02=" << f.sweep_phase02 << "\nsamples=" << f.samples << '\n';
  const Manifest manifest{ctx.command_line, config.str(), 0};

  if (!f.sweep_phase02.empty()) {
    const std::vector<double> offsets = parse_range(f.sweep_phase02);
    std::vector<std::pair<double, double>> curve(offsets.size());
    parallel_for(static_cast<int>(offsets.size()), ctx.workers, [&](int i) {
      const GatePlan plan = plan_gate(device, f.gate, offsets[static_cast<std::size_t>(i)]);
      curve[static_cast<std::size_t>(i)] = mean_spread(run_preparations(device, plan, preps, which, 1));
    });
    Sink sink(ctx, f.out);
    std::ostream& os = sink.stream();
    manifest.write(os);
    os << "phase02_offset_rad,average_fidelity,spread\n" << std::setprecision(10);
    for (std::size_t i = 0; i < offsets.size(); ++i)
      os << offsets[i] << ',' << curve[i].first << ',' << curve[i].second << '\n';
    return;
  }

  const GatePlan plan = plan_gate(device, f.gate);
  const std::vector<PrepResult> results = run_preparations(device, plan, preps, which, ctx.workers);
  const auto [mean, spread] = mean_spread(results);
  for (std::size_t i = 0; i < results.size(); ++i)
    if (!results[i].run.physicality.ok())
      ctx.err << "warning: preparation " << which[i] << " ended in an unphysical state (trace error "
              << results[i].run.physicality.trace_error << ", min eigenvalue " << results[i].run.physicality.min_eigenvalue
              << ")\n";

  Sink sink(ctx, f.out);
  std::ostream& os = sink.stream();
  manifest.write(os);
  os << "prep,label,fidelity,trace_error,min_eigenvalue,ode_steps\n" << std::setprecision(10);
  for (std::size_t i = 0; i < results.size(); ++i) {
    const PrepResult& r = results[i];
    os << which[i] << ',' << preps.pulses[static_cast<std::size_t>(which[i])].name << ',' << r.fidelity << ','
       << r.run.physicality.trace_error << ',' << r.run.physicality.min_eigenvalue << ',' << r.run.stats.accepted << '\n';
  }
  os << "# average_fidelity: " << mean << "\n# spread: " << spread << '\n';

  if (!f.states.empty()) {
    std::ofstream ss(f.states);
    if (!ss) throw ValidationError("cannot write '" + f.states + "'");
    manifest.write(ss);
    ss << "prep,row,col,re,im\n" << std::setprecision(12);
    for (std::size_t i = 0; i < results.size(); ++i)
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
          const Complex z = results[i].run.final_state(r, c);
          ss << which[i] << ',' << r << ',' << c << ',' << z.real() << ',' << z.imag() << '\n';
        }
  }
  if (!f.trajectories.empty())
    write_trajectories(device, plan, preps, which, f.samples, f.trajectories, manifest, ctx.workers);
}

}  // namespace

Action add_simulate(CLI::App& app) {
  auto f = std::make_shared<SimulateFlags>();
  CLI::App* sub = app.add_subcommand("simulate", "Simulate the gate on the tomography preparations");
  sub->add_option("--profile", f->profile, "Device profile (default: built-in flux qutrit)");
  add_gate_flags(*sub, f->gate);
  sub->add_option("--preparations", f->preparations, "all, or comma-separated indices 0..8")->capture_default_str();
  sub->add_option("--sweep-phase02", f->sweep_phase02, "Average fidelity versus 0-2 tone phase offset a:b:n (rad)");
  sub->add_option("--trajectories", f->trajectories, "Directory for per-preparation trajectory CSVs");
  sub->add_option("--samples", f->samples, "Trajectory samples per preparation")->capture_default_str();
  sub->add_option("--states", f->states, "CSV file for the final density matrices");
  sub->add_option("--out", f->out, "Write the table to this file instead of stdout");
  return [f](const Context& ctx) { run_simulate(*f, ctx); };
}

}  // namespace qutrit::cli
