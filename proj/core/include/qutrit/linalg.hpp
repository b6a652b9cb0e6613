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

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace qutrit {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

namespace linalg {

// Largest elementwise |M - M^dagger|.
double hermiticity_error(const CMatrix& m);

// Largest elementwise |U U^dagger - 1|.
double unitarity_error(const CMatrix& u);

// Eigendecomposition of a Hermitian matrix (ascending eigenvalues).
struct HermitianEig {
  RVector values;
  CMatrix vectors;
};
HermitianEig hermitian_eig(const CMatrix& h);

// f(H) for Hermitian H through its spectral decomposition.
template <typename F>
CMatrix hermitian_function(const CMatrix& h, F&& f) {
  const HermitianEig eig = hermitian_eig(h);
  CVector fvals(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) fvals(i) = f(eig.values(i));
  return eig.vectors * fvals.asDiagonal() * eig.vectors.adjoint();
}

// Principal square root of a positive semidefinite matrix; small negative
// eigenvalues from round-off are clamped to zero.
CMatrix sqrtm_psd(const CMatrix& m);

// Principal logarithm of a unitary via its Schur form. `min_distance_to_minus_one`
// receives the smallest |lambda + 1| over the spectrum (branch-cut proximity).
CMatrix logm_unitary(const CMatrix& u, double* min_distance_to_minus_one = nullptr);

// Nearest (Frobenius) positive semidefinite, unit-trace matrix.
CMatrix project_to_density(const CMatrix& m);

// Haar-random unitary (QR of a Ginibre matrix with phase fix).
CMatrix random_unitary(std::mt19937_64& rng, Eigen::Index dim);

// Random full-rank density matrix G G^dagger / Tr with G Ginibre.
CMatrix random_density(std::mt19937_64& rng, Eigen::Index dim);

}  // namespace linalg
}  // namespace qutrit
