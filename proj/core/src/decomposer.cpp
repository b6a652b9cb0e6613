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

#include "qutrit/decomposer.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <Eigen/SVD>

#include "qutrit/optimize.hpp"

namespace qutrit {
namespace {

double wrap_phase(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

double circular_diff(double a, double b) {
  const double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

struct Evaluation {
  CMatrix generator;
  Eigen::Vector3d diagonal;
  double branch_distance;
};

Evaluation evaluate(const CMatrix& target, const Eigen::Vector3d& phi) {
  // U_o = U_d^dagger target with U_d^dagger = diag(e^{+i phi}).
  CMatrix u_o = target;
  for (int j = 0; j < 3; ++j) u_o.row(j) *= std::polar(1.0, phi(j));
  Evaluation ev;
  ev.generator = kI * linalg::logm_unitary(u_o, &ev.branch_distance);
  for (int j = 0; j < 3; ++j) ev.diagonal(j) = ev.generator(j, j).real();
  return ev;
}

// Newton polish on the square system diag(G_o(phi)) = 0.
Eigen::Vector3d newton_polish(const CMatrix& target, Eigen::Vector3d phi, double tol) {
  constexpr double h = 1e-6;
  Eigen::Vector3d f = evaluate(target, phi).diagonal;
  for (int it = 0; it < 60 && f.cwiseAbs().maxCoeff() > tol * 1e-2; ++it) {
    Eigen::Matrix3d jac;
    for (int k = 0; k < 3; ++k) {
      Eigen::Vector3d plus = phi, minus = phi;
      plus(k) += h;
      minus(k) -= h;
      jac.col(k) = (evaluate(target, plus).diagonal - evaluate(target, minus).diagonal) / (2.0 * h);
    }
    const Eigen::Vector3d step = jac.jacobiSvd(Eigen::ComputeFullU | Eigen::ComputeFullV).solve(-f);
    double scale = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 20; ++ls) {
      const Eigen::Vector3d trial = phi + scale * step;
      const Eigen::Vector3d ft = evaluate(target, trial).diagonal;
      if (ft.norm() < f.norm()) {
        phi = trial;
        f = ft;
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!improved) break;
  }
  return phi;
}

auto sort_key(const GateDecomposition& d) {
  auto q = [](double x) { return std::llround(x * 1e9); };
  return std::make_tuple(q(std::abs(d.m02)), q(std::abs(d.m01) + std::abs(d.m12)), q(d.phases[0]),
                         q(d.phases[1]), q(d.phases[2]), q(d.m01.real()), q(d.m01.imag()));
}

bool same_decomposition(const GateDecomposition& a, const GateDecomposition& b, double tol) {
  for (int j = 0; j < 3; ++j)
    if (circular_diff(a.phases[static_cast<std::size_t>(j)], b.phases[static_cast<std::size_t>(j)]) > tol)
      return false;
  return std::abs(a.m01 - b.m01) <= tol && std::abs(a.m02 - b.m02) <= tol && std::abs(a.m12 - b.m12) <= tol;
}

}  // namespace

Complex GateDecomposition::element(int j, int k) const {
  if (j > k) return std::conj(element(k, j));
  if (j == 0 && k == 1) return m01;
  if (j == 0 && k == 2) return m02;
  if (j == 1 && k == 2) return m12;
  return {};
}

CMatrix GateDecomposition::offdiagonal_generator() const {
  CMatrix g = CMatrix::Zero(3, 3);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k)
      if (j != k) g(j, k) = element(j, k);
  return g;
}

CMatrix GateDecomposition::diagonal_generator() const {
  CMatrix g = CMatrix::Zero(3, 3);
  for (int j = 0; j < 3; ++j) g(j, j) = phases[static_cast<std::size_t>(j)];
  return g;
}

UnitaryOperator GateDecomposition::diagonal_unitary() const { return expm_skew(diagonal_generator(), 1.0); }

UnitaryOperator GateDecomposition::offdiagonal_unitary() const {
  return expm_skew(offdiagonal_generator(), 1.0);
}

UnitaryOperator GateDecomposition::reconstruct() const { return diagonal_unitary() * offdiagonal_unitary(); }

void DecompositionSearchConfig::validate() const {
  if (grid_points < 8) throw ValidationError("decomposition grid needs at least 8 points per axis");
  if (!(refine_tol > 0.0) || !(dedup_tol > 0.0)) throw ValidationError("search tolerances must be positive");
}

std::vector<GateDecomposition> search_decompositions(const UnitaryOperator& target,
                                                     const DecompositionSearchConfig& config) {
  config.validate();
  if (target.dim() != 3) throw ValidationError("decomposition search requires a 3x3 target");
  const CMatrix& u = target.matrix();
  const int n = config.grid_points;
  const double spacing = kTwoPi / n;

  std::vector<double> grid(static_cast<std::size_t>(n) * n * n);
  auto index = [n](int i, int j, int k) {
    auto w = [n](int x) { return ((x % n) + n) % n; };
    return (static_cast<std::size_t>(w(i)) * n + w(j)) * n + w(k);
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        grid[index(i, j, k)] =
            evaluate(u, Eigen::Vector3d(i * spacing, j * spacing, k * spacing)).diagonal.cwiseAbs().maxCoeff();

  std::vector<GateDecomposition> found;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const double v = grid[index(i, j, k)];
        bool is_min = true;
        for (int di = -1; di <= 1 && is_min; ++di)
          for (int dj = -1; dj <= 1 && is_min; ++dj)
            for (int dk = -1; dk <= 1 && is_min; ++dk)
              if ((di || dj || dk) && grid[index(i + di, j + dj, k + dk)] < v) is_min = false;
        if (!is_min) continue;

        const optimize::Objective sq = [&u](const RVector& x) {
          return evaluate(u, Eigen::Vector3d(x(0), x(1), x(2))).diagonal.squaredNorm();
        };
        optimize::NelderMeadOptions nm;
        nm.initial_step = spacing / 2.0;
        nm.x_tol = 1e-9;
        nm.max_evaluations = 4000;
        nm.restarts = 1;
        const optimize::Minimum coarse = optimize::nelder_mead(sq, RVector(Eigen::Vector3d(i * spacing, j * spacing, k * spacing)), nm);
        const Eigen::Vector3d phi =
            newton_polish(u, Eigen::Vector3d(coarse.x(0), coarse.x(1), coarse.x(2)), config.refine_tol);

        Eigen::Vector3d wrapped;
        for (int a = 0; a < 3; ++a) wrapped(a) = wrap_phase(phi(a));
        const Evaluation ev = evaluate(u, wrapped);
        if (ev.diagonal.cwiseAbs().maxCoeff() >= config.refine_tol) continue;

        GateDecomposition d;
        d.m01 = ev.generator(0, 1);
        d.m02 = ev.generator(0, 2);
        d.m12 = ev.generator(1, 2);
        d.phases = {wrapped(0), wrapped(1), wrapped(2)};
        d.degenerate_branch = ev.branch_distance < 1e-6;
        CMatrix ud = CMatrix::Zero(3, 3);
        for (int a = 0; a < 3; ++a) ud(a, a) = std::polar(1.0, -wrapped(a));
        const CMatrix herm = 0.5 * (d.offdiagonal_generator() + d.offdiagonal_generator().adjoint());
        const CMatrix uo = linalg::hermitian_function(herm, [](double e) { return std::exp(-kI * e); });
        d.residual = (ud * uo - u).norm();
        if (d.residual > 1e-6) continue;

        const bool duplicate = std::any_of(found.begin(), found.end(), [&](const GateDecomposition& other) {
          return same_decomposition(other, d, config.dedup_tol);
        });
        if (!duplicate) found.push_back(d);
      }
    }
  }
  std::sort(found.begin(), found.end(),
            [](const GateDecomposition& a, const GateDecomposition& b) { return sort_key(a) < sort_key(b); });
  return found;
}

OffDiagonalExtraction extract_offdiagonal_generator(const UnitaryOperator& u_o, double refine_tol) {
  OffDiagonalExtraction out;
  double branch = 0.0;
  out.generator = kI * linalg::logm_unitary(u_o.matrix(), &branch);
  out.generator = 0.5 * (out.generator + out.generator.adjoint()).eval();
  out.degenerate = branch < 1e-6;
  out.max_diagonal = out.generator.diagonal().cwiseAbs().maxCoeff();
  out.accepted = out.max_diagonal < refine_tol && !out.degenerate;
  return out;
}

GateDecomposition select_decomposition(const std::vector<GateDecomposition>& candidates) {
  if (candidates.empty()) throw ValidationError("select_decomposition: no candidates");
  return *std::min_element(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    return sort_key(a) < sort_key(b);
  });
}

std::array<TransitionTarget, 3> pulse_area_targets(const GateDecomposition& d, double gate_duration) {
  if (!(gate_duration > 0.0)) throw ValidationError("gate duration must be positive");
  std::array<TransitionTarget, 3> out;
  const std::array<std::pair<int, int>, 3> pairs{{{0, 1}, {1, 2}, {0, 2}}};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Complex m = d.element(pairs[i].first, pairs[i].second);
    out[i].transition = pairs[i];
    out[i].rabi_rate = 2.0 * std::abs(m) / gate_duration;
    out[i].phase = std::abs(m) > 0.0 ? std::arg(m) : 0.0;
  }
  return out;
}

}  // namespace qutrit
