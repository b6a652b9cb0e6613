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
#include <optional>
#include <string>
#include <vector>

#include "qutrit/errors.hpp"
#include "qutrit/linalg.hpp"

namespace qutrit {

inline constexpr double kValidationTol = 1e-10;

struct DensityValidation;

/// A dim x dim unitary. Construction checks U U^dagger = 1 within 1e-10.
class UnitaryOperator {
 public:
  UnitaryOperator() : matrix_(CMatrix::Identity(3, 3)) {}
  explicit UnitaryOperator(CMatrix m, double tol = kValidationTol);

  static UnitaryOperator identity(Eigen::Index dim);

  const CMatrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  UnitaryOperator adjoint() const;

  friend UnitaryOperator operator*(const UnitaryOperator& a, const UnitaryOperator& b);

 private:
  struct Unchecked {};
  UnitaryOperator(CMatrix m, Unchecked) : matrix_(std::move(m)) {}
  CMatrix matrix_;
};

/// A physical density matrix: Hermitian and unit trace within 1e-10, with no
/// eigenvalue below -1e-10.
class DensityMatrix {
 public:
  DensityMatrix() : matrix_(CMatrix::Identity(3, 3) / 3.0) {}
  explicit DensityMatrix(CMatrix m, double tol = kValidationTol);

  static DensityMatrix pure(const CVector& psi);
  static DensityMatrix diagonal(const std::vector<double>& populations);
  static DensityMatrix maximally_mixed(Eigen::Index dim);

  const CMatrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  double population(Eigen::Index level) const { return matrix_(level, level).real(); }

  DensityMatrix conjugated(const UnitaryOperator& u) const;

 private:
  struct Unchecked {};
  DensityMatrix(CMatrix m, Unchecked) : matrix_(std::move(m)) {}
  friend DensityValidation validate_density(const CMatrix& m, double tol);
  CMatrix matrix_;
};

enum class Invariant { kSquare, kHermitian, kTrace, kPositivity, kFinite };

std::string to_string(Invariant inv);

struct Violation {
  Invariant invariant;
  double magnitude;  // how far outside tolerance (absolute)
};

/// Outcome of validate_density. Exactly one of `state` or a non-empty
/// `violations` list is populated; the input is never repaired.
struct DensityValidation {
  std::optional<DensityMatrix> state;
  std::vector<Violation> violations;

  bool accepted() const { return state.has_value(); }
  std::string describe() const;
};

DensityValidation validate_density(const CMatrix& m, double tol = kValidationTol);

// ----------------------------------------------------------------------------
// Device description.

enum class CoherenceShape { kExponential, kGaussian };

/// Decoherence on the lowest three levels. gamma(i, j) is the rate for the
/// transition i -> j (relaxation for i > j, excitation for i < j), in 1/s.
/// pure_dephasing(i, j), i < j, is the dephasing rate of the (i, j) pair.
struct DecoherenceRates {
  Eigen::Matrix3d gamma = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d pure_dephasing = Eigen::Matrix3d::Zero();
  CoherenceShape coherence_shape = CoherenceShape::kExponential;

  bool is_zero() const;
  void validate() const;
  // Symmetric lookup of the dephasing rate for an unordered pair.
  double dephasing(int i, int j) const;
};

/// Averaged homodyne readout: V = sum_j P_j * voltage_levels[j].
struct ReadoutModel {
  std::array<double, 3> voltage_levels{1.0, -1.0, 0.3};
  double noise_sigma = 0.0;
  // Ground-state population of the steady (thermal) state, P_th0.
  double thermal_p0 = 0.74;

  void validate() const;
  double voltage_span() const;
  // diag(V_h0, V_h1, V_h2) padded with zeros up to `dim`.
  CMatrix voltage_operator(Eigen::Index dim = 3) const;
};

/// N-level driven device. Angular frequencies in rad/s with level_freqs(0) = 0.
/// drive_couplings(j, k) = g_jk gives the Rabi rate g_jk * A for amplitude A.
struct DeviceSpec {
  RVector level_freqs;
  RMatrix drive_couplings;
  DecoherenceRates decoherence;
  ReadoutModel readout;

  int n_levels() const { return static_cast<int>(level_freqs.size()); }
  // omega_k - omega_j.
  double transition_freq(int j, int k) const { return level_freqs(k) - level_freqs(j); }
  void validate() const;
};

// ----------------------------------------------------------------------------
// Operations.

/// exp(-i H t) for Hermitian H. Throws ValidationError if H is not Hermitian.
UnitaryOperator expm_skew(const CMatrix& generator, double t);

/// Squared Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double state_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Un-squared Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)).
double root_fidelity(const CMatrix& rho, const CMatrix& sigma);

/// min over theta of ||U - e^{i theta} V||_F = sqrt(2 (d - |Tr(U^dagger V)|)).
double unitary_distance(const UnitaryOperator& u, const UnitaryOperator& v);
double unitary_distance(const CMatrix& u, const CMatrix& v);

/// The qutrit Walsh-Hadamard (single-qutrit Fourier) gate.
UnitaryOperator walsh_hadamard();

/// The three-level flux-qutrit device: transitions at 2pi*1.146 GHz and
/// 2pi*5.693 GHz, measured relaxation/excitation and dephasing rates,
/// Gaussian coherence decay, thermal P_th0 = 0.74.
DeviceSpec paper_device();

/// diag(P_th0, 1 - P_th0, 0, ...) on `dim` levels.
DensityMatrix thermal_state(double p0, Eigen::Index dim = 3);

}  // namespace qutrit
