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
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "pipeline.hpp"
#include "qutrit/decomposer.hpp"

namespace qutrit::cli {
namespace {

struct DecomposeFlags {
  std::string target = "wh";
  std::string out;
  int grid = DecompositionSearchConfig{}.grid_points;
  double refine_tol = DecompositionSearchConfig{}.refine_tol;
  double dedup_tol = DecompositionSearchConfig{}.dedup_tol;
};

void run_decompose(const DecomposeFlags& f, const Context& ctx) {
  const UnitaryOperator target = resolve_target(f.target);
  DecompositionSearchConfig cfg;
  cfg.grid_points = f.grid;
  cfg.refine_tol = f.refine_tol;
  cfg.dedup_tol = f.dedup_tol;
  cfg.validate();

  const std::vector<GateDecomposition> found = search_decompositions(target, cfg);
  std::optional<GateDecomposition> selected;
  if (!found.empty()) selected = select_decomposition(found);

  if (found.empty()) {
    ctx.err << "warning: no grid cell refined to an exact decomposition; try a finer --grid\n";
  } else if (f.grid < DecompositionSearchConfig{}.grid_points) {
    ctx.err << "warning: --grid " << f.grid << " is coarser than the default " << DecompositionSearchConfig{}.grid_points
            << "; found " << found.size() << " decomposition(s), some may be missed\n";
  }

  std::ostringstream config;
  config << std::setprecision(17) << "target=" << target.matrix().format(Eigen::IOFormat(17, Eigen::DontAlignCols))
         << "\ngrid=" << f.grid << "\nrefine_tol=" << f.refine_tol << "\ndedup_tol=" << f.dedup_tol << '\n';
  Sink sink(ctx, f.out);
  std::ostream& os = sink.stream();
  Manifest{ctx.command_line, config.str(), 0}.write(os);
  os << "index,m01_re,m01_im,m12_re,m12_im,m02_re,m02_im,phi0_rad,phi1_rad,phi2_rad,residual,degenerate,selected\n";
  os << std::setprecision(10);
  for (std::size_t i = 0; i < found.size(); ++i) {
    const GateDecomposition& d = found[i];
    const bool is_sel = selected && d.phases == selected->phases;
    os << i << ',' << d.m01.real() << ',' << d.m01.imag() << ',' << d.m12.real() << ',' << d.m12.imag() << ','
       << d.m02.real() << ',' << d.m02.imag() << ',' << d.phases[0] << ',' << d.phases[1] << ',' << d.phases[2] << ','
       << std::setprecision(3) << d.residual << std::setprecision(10) << ',' << (d.degenerate_branch ? 1 : 0) << ','
       << (is_sel ? 1 : 0) << '\n';
  }
}

}  // namespace

Action add_decompose(CLI::App& app) {
  auto f = std::make_shared<DecomposeFlags>();
  CLI::App* sub = app.add_subcommand("decompose", "Factor a target gate into diagonal and off-diagonal generators");
  sub->add_option("--target", f->target, "wh, walsh-hadamard, identity, or a matrix file")->capture_default_str();
  sub->add_option("--grid", f->grid, "Coarse grid points per phase axis")->capture_default_str();
  sub->add_option("--refine-tol", f->refine_tol, "Refinement tolerance on max |diag G_o|")->capture_default_str();
  sub->add_option("--dedup-tol", f->dedup_tol, "Phase distance below which solutions coincide")->capture_default_str();
  sub->add_option("--out", f->out, "Write the table to this file instead of stdout");
  return [f](const Context& ctx) { run_decompose(*f, ctx); };
}

}  // namespace qutrit::cli
