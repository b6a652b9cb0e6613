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

#include "qutrit/core.hpp"

#include <cmath>
#include <sstream>

namespace qutrit {

// ---------------------------------------------------------------------------
// UnitaryOperator

UnitaryOperator::UnitaryOperator(CMatrix m, double tol) : matrix_(std::move(m)) {
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols())
    throw ValidationError("unitary must be a non-empty square matrix");
  if (!matrix_.allFinite()) throw ValidationError("unitary has non-finite entries");
  const double err = linalg::unitarity_error(matrix_);
  if (err > tol) {
    std::ostringstream msg;
    msg << "matrix is not unitary: max |U U^dagger - 1| = " << err;
    throw ValidationError(msg.str());
  }
}

UnitaryOperator UnitaryOperator::identity(Eigen::Index dim) {
  return UnitaryOperator(CMatrix::Identity(dim, dim), Unchecked{});
}

UnitaryOperator UnitaryOperator::adjoint() const {
  return UnitaryOperator(matrix_.adjoint(), Unchecked{});
}

UnitaryOperator operator*(const UnitaryOperator& a, const UnitaryOperator& b) {
  if (a.dim() != b.dim()) throw ValidationError("unitary dimension mismatch");
  return UnitaryOperator(a.matrix_ * b.matrix_, UnitaryOperator::Unchecked{});
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(CMatrix m, double tol) {
  DensityValidation v = validate_density(m, tol);
  if (!v.accepted()) throw ValidationError(v.describe());
  matrix_ = std::move(m);
}

DensityMatrix DensityMatrix::pure(const CVector& psi) {
  const double norm = psi.norm();
  if (norm == 0.0) throw ValidationError("cannot build a pure state from the zero vector");
  const CVector n = psi / norm;
  return DensityMatrix(n * n.adjoint());
}

DensityMatrix DensityMatrix::diagonal(const std::vector<double>& populations) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(populations.size()),
                            static_cast<Eigen::Index>(populations.size()));
  for (std::size_t i = 0; i < populations.size(); ++i)
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = populations[i];
  return DensityMatrix(m);
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
  return DensityMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::conjugated(const UnitaryOperator& u) const {
  if (u.dim() != dim()) throw ValidationError("dimension mismatch in conjugation");
  CMatrix out = u.matrix() * matrix_ * u.matrix().adjoint();
  // Unitary conjugation is exact up to round-off; re-symmetrize.
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(std::move(out), 1e-9);
}

std::string to_string(Invariant inv) {
  switch (inv) {
    case Invariant::kSquare: return "square";
    case Invariant::kHermitian: return "hermiticity";
    case Invariant::kTrace: return "trace";
    case Invariant::kPositivity: return "positivity";
    case Invariant::kFinite: return "finite";
  }
  return "unknown";
}

std::string DensityValidation::describe() const {
  if (accepted()) return "valid density matrix";
  std::ostringstream out;
  out << "invalid density matrix:";
  for (const Violation& v : violations) out << ' ' << to_string(v.invariant) << " (" << v.magnitude << ")";
  return out.str();
}

DensityValidation validate_density(const CMatrix& m, double tol) {
  DensityValidation result;
  if (m.rows() == 0 || m.rows() != m.cols()) {
    result.violations.push_back({Invariant::kSquare, static_cast<double>(std::abs(m.rows() - m.cols()))});
    return result;
  }
  if (!m.allFinite()) {
    result.violations.push_back({Invariant::kFinite, std::numeric_limits<double>::infinity()});
    return result;
  }
  const double herm = linalg::hermiticity_error(m);
  if (herm > tol) result.violations.push_back({Invariant::kHermitian, herm});
  const double trace_err = std::abs(m.trace() - Complex(1.0, 0.0));
  if (trace_err > tol) result.violations.push_back({Invariant::kTrace, trace_err});
  const double min_eig = linalg::hermitian_eig(m).values.minCoeff();
  if (min_eig < -tol) result.violations.push_back({Invariant::kPositivity, -min_eig});
  if (result.violations.empty()) result.state = DensityMatrix(m, DensityMatrix::Unchecked{});
  return result;
}

// ---------------------------------------------------------------------------
// Device

bool DecoherenceRates::is_zero() const {
  return gamma.isZero(0.0) && pure_dephasing.isZero(0.0);
}

double DecoherenceRates::dephasing(int i, int j) const {
  if (i == j) return 0.0;
  return i < j ? pure_dephasing(i, j) : pure_dephasing(j, i);
}

void DecoherenceRates::validate() const {
  if (!gamma.allFinite() || !pure_dephasing.allFinite())
    throw ValidationError("decoherence rates must be finite");
  if ((gamma.array() < 0.0).any() || (pure_dephasing.array() < 0.0).any())
    throw ValidationError("decoherence rates must be non-negative");
  for (int i = 0; i < 3; ++i)
    if (gamma(i, i) != 0.0) throw ValidationError("decoherence rate Gamma_ii must be zero");
}

void ReadoutModel::validate() const {
  const auto& v = voltage_levels;
  if (v[0] == v[1] || v[1] == v[2] || v[0] == v[2])
    throw ValidationError("readout voltage levels must be pairwise distinct");
  if (noise_sigma < 0.0) throw ValidationError("readout noise sigma must be non-negative");
  if (!(thermal_p0 > 0.0 && thermal_p0 <= 1.0))
    throw ValidationError("thermal ground population must lie in (0, 1]");
}

double ReadoutModel::voltage_span() const {
  const auto [lo, hi] = std::minmax({voltage_levels[0], voltage_levels[1], voltage_levels[2]});
  return hi - lo;
}

CMatrix ReadoutModel::voltage_operator(Eigen::Index dim) const {
  CMatrix v = CMatrix::Zero(dim, dim);
  for (Eigen::Index j = 0; j < std::min<Eigen::Index>(dim, 3); ++j) v(j, j) = voltage_levels[j];
  return v;
}

void DeviceSpec::validate() const {
  const int n = n_levels();
  if (n < 3) throw ValidationError("device needs at least 3 levels");
  if (level_freqs(0) != 0.0) throw ValidationError("level frequency omega_0 must be 0");
  for (int j = 1; j < n; ++j)
    if (!(level_freqs(j) > level_freqs(j - 1)))
      throw ValidationError("level frequencies must be strictly increasing");
  if (drive_couplings.rows() != n || drive_couplings.cols() != n)
    throw ValidationError("drive coupling matrix must be n_levels x n_levels");
  for (int j = 0; j < n; ++j) {
    if (drive_couplings(j, j) != 0.0) throw ValidationError("drive coupling g_jj must be zero");
    for (int k = j + 1; k < n; ++k)
      if (drive_couplings(j, k) != drive_couplings(k, j))
        throw ValidationError("drive coupling matrix must be symmetric");
  }
  decoherence.validate();
  readout.validate();
}

// ---------------------------------------------------------------------------
// Operations

UnitaryOperator expm_skew(const CMatrix& generator, double t) {
  if (generator.rows() == 0 || generator.rows() != generator.cols())
    throw ValidationError("generator must be a non-empty square matrix");
  const double herm = linalg::hermiticity_error(generator);
  if (herm > kValidationTol) {
    std::ostringstream msg;
    msg << "generator is not Hermitian: max |H - H^dagger| = " << herm;
    throw ValidationError(msg.str());
  }
  return UnitaryOperator(
      linalg::hermitian_function(generator, [t](double e) { return std::exp(-kI * e * t); }), 1e-9);
}

double root_fidelity(const CMatrix& rho, const CMatrix& sigma) {
  if (rho.rows() != sigma.rows()) throw ValidationError("fidelity: dimension mismatch");
  const CMatrix s = linalg::sqrtm_psd(rho);
  const CMatrix inner = s * sigma * s;
  const linalg::HermitianEig eig = linalg::hermitian_eig(inner);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) acc += std::sqrt(std::max(eig.values(i), 0.0));
  return acc;
}

double state_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const double f = root_fidelity(rho.matrix(), sigma.matrix());
  return std::clamp(f * f, 0.0, 1.0);
}

double unitary_distance(const CMatrix& u, const CMatrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw ValidationError("unitary_distance: dimension mismatch");
  const double d = static_cast<double>(u.rows());
  const double overlap = std::abs((u.adjoint() * v).trace());
  return std::sqrt(std::max(0.0, 2.0 * (d - overlap)));
}

double unitary_distance(const UnitaryOperator& u, const UnitaryOperator& v) {
  return unitary_distance(u.matrix(), v.matrix());
}

UnitaryOperator walsh_hadamard() {
  const Complex w = std::polar(1.0, kTwoPi / 3.0);
  CMatrix m(3, 3);
  m << 1.0, 1.0, 1.0,
       1.0, w, std::conj(w),
       1.0, std::conj(w), w;
  return UnitaryOperator(m / std::sqrt(3.0));
}

DensityMatrix thermal_state(double p0, Eigen::Index dim) {
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw ValidationError("thermal population must lie in [0, 1]");
  std::vector<double> pops(static_cast<std::size_t>(dim), 0.0);
  pops[0] = p0;
  pops[1] = 1.0 - p0;
  return DensityMatrix::diagonal(pops);
}

DeviceSpec paper_device() {
  constexpr double kGHz = kTwoPi * 1e9;
  constexpr double kkHz = 1e3;
  DeviceSpec d;
  d.level_freqs = RVector(3);
  d.level_freqs << 0.0, 1.146 * kGHz, (1.146 + 5.693) * kGHz;
  d.drive_couplings = RMatrix::Zero(3, 3);
  d.drive_couplings(0, 1) = d.drive_couplings(1, 0) = 0.100 * kGHz;
  d.drive_couplings(1, 2) = d.drive_couplings(2, 1) = 0.150 * kGHz;

  Eigen::Matrix3d& g = d.decoherence.gamma;
  g(1, 0) = 16.2 * kkHz;
  g(0, 1) = 5.5 * kkHz;
  g(2, 0) = 21.6 * kkHz;
  g(2, 1) = 314.5 * kkHz;
  g(1, 2) = 1.74 * kkHz;
  g(0, 2) = 0.042 * kkHz;
  Eigen::Matrix3d& r = d.decoherence.pure_dephasing;
  r(0, 1) = r(1, 0) = 204.1 * kkHz;
  r(1, 2) = r(2, 1) = 238.1 * kkHz;
  r(0, 2) = r(2, 0) = 181.8 * kkHz;
  d.decoherence.coherence_shape = CoherenceShape::kGaussian;

  d.readout.voltage_levels = {1e-3, -1e-3, 0.3e-3};
  d.readout.thermal_p0 = 0.74;
  return d;
}

}  // namespace qutrit
