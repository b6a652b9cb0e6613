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
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qutrit/core.hpp"
#include "qutrit/decomposer.hpp"
#include "qutrit/pulse.hpp"

namespace qutrit {

enum class Axis { kX, kY };

/// R_axis^{jk}(angle) = exp(-i angle/2 sigma_axis) on the (j, k) subspace.
UnitaryOperator rotation(std::pair<int, int> transition, Axis axis, double angle);

/// A named pulse built from rotations listed in temporal order.
struct Analyzer {
  std::string name;
  std::vector<RotationStep> steps;
  CMatrix unitary() const { return sequence_unitary(steps); }
};

struct AnalyzerSet {
  std::vector<Analyzer> pulses;

  std::vector<CMatrix> unitaries() const;
  // Real rank of the induced measurement operators u^dagger V_h u.
  int measurement_rank(const ReadoutModel& readout) const;
};

/// Tomography pulses u_0..u_8, applied left to right as listed in the table.
AnalyzerSet tomography_analyzers();
/// State preparations p_0..p_8, read as operator products (rightmost first).
AnalyzerSet state_preparations();

/// Absorbs U_d = diag(e^{-i phi_j}) into the analyzers: u -> U_d^dagger u U_d.
/// A rotation on (j, k) with axis angle alpha becomes one with
/// alpha - (phi_j - phi_k).
AnalyzerSet phase_shift_analyzers(const AnalyzerSet& set, const std::array<double, 3>& phases);
AnalyzerSet phase_shift_analyzers(const AnalyzerSet& set, const GateDecomposition& d);

// ----------------------------------------------------------------------------
// Readout.

/// Tr(u rho u^dagger V_h), plus N(0, noise_sigma) when `noise` is set. The
/// noise draw is a pure function of `seed`.
double simulate_homodyne(const CMatrix& rho, const CMatrix& analyzer, const ReadoutModel& readout, bool noise,
                         std::uint64_t seed);

/// Noiseless voltages for every analyzer.
std::vector<double> expected_voltages(const CMatrix& rho, const std::vector<CMatrix>& analyzers,
                                      const ReadoutModel& readout);

// ----------------------------------------------------------------------------
// State tomography.

enum class Likelihood { kL1, kL2 };

struct StateMleOptions {
  Likelihood likelihood = Likelihood::kL1;
  int restarts = 20;
  double x_tol = 1e-10;
  int max_evaluations = 20000;
  std::uint64_t seed = 1;
};

struct StateEstimate {
  DensityMatrix rho;
  double objective = 0.0;
  int evaluations = 0;
  int iterations = 0;
  RVector params;
};

/// rho = T^dagger T / Tr with T lower triangular: diagonal (t1, t2, t3),
/// T(1,0) = t4 + i t5, T(2,1) = t6 + i t7, T(2,0) = t8 + i t9.
CMatrix cholesky_state(const RVector& t);
/// Parameters reproducing a (regularized) density matrix.
RVector cholesky_params(const CMatrix& rho);

/// Least-squares linear inversion over Hermitian unit-trace matrices.
CMatrix linear_inversion_state(const std::vector<double>& voltages, const std::vector<CMatrix>& analyzers,
                               const ReadoutModel& readout);

StateEstimate mle_state(const std::vector<double>& voltages, const std::vector<CMatrix>& analyzers,
                        const ReadoutModel& readout, const StateMleOptions& options = {});

// ----------------------------------------------------------------------------
// Process tomography.

/// lambda_0 = identity, lambda_1..8 = sqrt(3/2) Gell-Mann matrices, so that
/// Tr(lambda_m lambda_n^dagger) = 3 delta_mn.
struct OperatorBasis {
  std::array<CMatrix, 9> elements;

  RMatrix gram() const;
  // Coefficients e_m of A = sum_m e_m lambda_m.
  CVector coefficients(const CMatrix& a) const;
  bool operator==(const OperatorBasis& other) const;
};

OperatorBasis build_operator_basis();

struct ProcessMatrix {
  CMatrix chi;
  OperatorBasis basis;

  CMatrix apply(const CMatrix& rho) const;
};

ProcessMatrix ideal_chi(const UnitaryOperator& u, const OperatorBasis& basis);

struct ProcessMleOptions {
  int restarts = 3;
  int max_evaluations = 20000;
  std::uint64_t seed = 1;
};

struct ProcessEstimate {
  ProcessMatrix process;
  double objective = 0.0;
  int iterations = 0;
};

/// chi = T^dagger T / Tr with T a 9x9 lower-triangular Cholesky factor,
/// minimizing sum_ij (m_ij - m_ij^exp)^2 with
/// m_ij = sum_mn chi_mn Tr(M_i lambda_m p_j rho_n p_j^dagger lambda_n^dagger).
/// records(i, j): analyzer i, preparation j.
ProcessEstimate process_mle(const RMatrix& records, const std::vector<CMatrix>& preparations,
                            const std::vector<CMatrix>& analyzers, const ReadoutModel& readout,
                            const OperatorBasis& basis, const CMatrix& nominal_state,
                            const ProcessMleOptions& options = {});

/// Noiseless m_ij for a process acting on the prepared states.
RMatrix process_records(const ProcessMatrix& process, const std::vector<CMatrix>& preparations,
                        const std::vector<CMatrix>& analyzers, const ReadoutModel& readout,
                        const CMatrix& nominal_state);

/// Tr sqrt(sqrt(chi_ideal) chi sqrt(chi_ideal)), un-squared.
double process_fidelity(const ProcessMatrix& chi, const ProcessMatrix& chi_ideal);

// ----------------------------------------------------------------------------
// Calibration.

struct ThermalPopulations {
  double p0 = 0.0;
  double p1 = 0.0;
};

/// P_th1 / P_th0 = amp_swap02 / amp_swap12 with P_th0 + P_th1 = 1.
ThermalPopulations thermal_populations(double rabi_amp_swap12, double rabi_amp_swap02);

/// Solves the voltages measured for population patterns (P0, P1, 0),
/// (P1, P0, 0) and (P1, 0, P0) for (V_h0, V_h1, V_h2).
std::array<double, 3> solve_voltage_levels(double v_thermal, double v_swap01, double v_swap01_12, double p_th0);

// ----------------------------------------------------------------------------
// Record files: CSV with header prep_index,analyzer_index,voltage_volts.

struct VoltageRecord {
  int prep_index = 0;
  int analyzer_index = 0;
  double voltage = 0.0;
};

inline constexpr const char* kRecordCsvHeader = "prep_index,analyzer_index,voltage_volts";

// Blank lines and lines starting with # are skipped.
std::vector<VoltageRecord> read_records_csv(std::istream& in);
void write_records_csv(std::ostream& out, const std::vector<VoltageRecord>& records);

/// records(i, j) for analyzer i, preparation j. Throws ValidationError
/// listing every missing (prep, analyzer) pair.
RMatrix assemble_records(const std::vector<VoltageRecord>& records, int n_preparations, int n_analyzers);

}  // namespace qutrit
