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

#include <array>
#include <utility>
#include <vector>

#include "qutrit/core.hpp"

namespace qutrit {

/// One factorization target = U_d * U_o with U_d = exp(-i diag(phi)) and
/// U_o = exp(-i G_o), G_o Hermitian with zero diagonal and upper elements
/// m01, m02, m12.
struct GateDecomposition {
  Complex m01{};
  Complex m02{};
  Complex m12{};
  std::array<double, 3> phases{};  // phi_0..phi_2 in [0, 2pi)
  double residual = 0.0;           // ||U_d U_o - target||_F
  bool degenerate_branch = false;  // U_o has an eigenvalue within 1e-6 of -1

  // Upper-triangle element m_jk (j < k).
  Complex element(int j, int k) const;
  CMatrix offdiagonal_generator() const;
  CMatrix diagonal_generator() const;
  UnitaryOperator diagonal_unitary() const;
  UnitaryOperator offdiagonal_unitary() const;
  UnitaryOperator reconstruct() const;
};

struct DecompositionSearchConfig {
  // Coarse grid points per phase axis. Minima of the coarse grid are refined
  // to refine_tol, so 40 per axis already resolves every WH decomposition.
  int grid_points = 40;
  double refine_tol = 1e-10;
  double dedup_tol = 1e-3;

  void validate() const;
};

/// Sweep (phi_0, phi_1, phi_2) over [0, 2pi)^3, refine every coarse-grid
/// minimum of max_j |(G_o)_jj| and return the distinct exact decompositions,
/// sorted by |m02| (ties: |m01| + |m12|, then lexicographic). Deterministic.
std::vector<GateDecomposition> search_decompositions(const UnitaryOperator& target,
                                                     const DecompositionSearchConfig& config = {});

struct OffDiagonalExtraction {
  CMatrix generator;          // i log(U_o), principal branch
  double max_diagonal = 0.0;  // max_j |G_jj|
  bool accepted = false;
  bool degenerate = false;  // eigenvalue at -1: the log branch is ambiguous
};

OffDiagonalExtraction extract_offdiagonal_generator(const UnitaryOperator& u_o, double refine_tol = 1e-10);

/// Candidate minimizing |m02|; ties broken by smallest |m01| + |m12|.
GateDecomposition select_decomposition(const std::vector<GateDecomposition>& candidates);

struct TransitionTarget {
  std::pair<int, int> transition;
  double rabi_rate = 0.0;  // rad/s
  double phase = 0.0;      // arg(m_jk)
};

/// Square-envelope pulse targets: rabi_rate_jk * duration = 2 |m_jk|.
/// Order: (0,1), (1,2), (0,2).
std::array<TransitionTarget, 3> pulse_area_targets(const GateDecomposition& d, double gate_duration);

}  // namespace qutrit
