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

#include "qutrit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>

namespace qutrit::linalg {

double hermiticity_error(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_error(const CMatrix& u) {
  if (u.size() == 0) return 0.0;
  const CMatrix id = CMatrix::Identity(u.rows(), u.cols());
  return (u * u.adjoint() - id).cwiseAbs().maxCoeff();
}

HermitianEig hermitian_eig(const CMatrix& h) {
  // Symmetrize so that round-off asymmetry does not leak into the solver.
  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

CMatrix sqrtm_psd(const CMatrix& m) {
  return hermitian_function(m, [](double x) { return Complex(std::sqrt(std::max(x, 0.0)), 0.0); });
}

CMatrix logm_unitary(const CMatrix& u, double* min_distance_to_minus_one) {
  Eigen::ComplexSchur<CMatrix> schur(u);
  const CMatrix& t = schur.matrixT();
  const CMatrix& q = schur.matrixU();
  CVector logs(t.rows());
  double closest = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    const Complex lambda = t(i, i);
    closest = std::min(closest, std::abs(lambda + 1.0));
    // Unitary spectrum lies on the unit circle; the principal branch takes
    // arg in (-pi, pi].
    logs(i) = Complex(std::log(std::abs(lambda)), std::arg(lambda));
  }
  if (min_distance_to_minus_one != nullptr) *min_distance_to_minus_one = closest;
  return q * logs.asDiagonal() * q.adjoint();
}

CMatrix project_to_density(const CMatrix& m) {
  const HermitianEig eig = hermitian_eig(m);
  // Euclidean projection of the spectrum onto the probability simplex.
  const Eigen::Index n = eig.values.size();
  std::vector<double> sorted(eig.values.data(), eig.values.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double shift = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) shift = candidate;
  }
  CVector clipped(n);
  for (Eigen::Index i = 0; i < n; ++i) clipped(i) = std::max(eig.values(i) - shift, 0.0);
  return eig.vectors * clipped.asDiagonal() * eig.vectors.adjoint();
}

namespace {

CMatrix ginibre(std::mt19937_64& rng, Eigen::Index dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  return g;
}

}  // namespace

CMatrix random_unitary(std::mt19937_64& rng, Eigen::Index dim) {
  Eigen::HouseholderQR<CMatrix> qr(ginibre(rng, dim));
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double mag = std::abs(r(i, i));
    if (mag > 0.0) q.col(i) *= r(i, i) / mag;
  }
  return q;
}

CMatrix random_density(std::mt19937_64& rng, Eigen::Index dim) {
  const CMatrix g = ginibre(rng, dim);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

}  // namespace qutrit::linalg
