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
#include <random>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "qutrit/core.hpp"
#include "qutrit/linalg.hpp"

namespace qutrit {
namespace {

CMatrix random_hermitian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  return 0.5 * (a + a.adjoint());
}

TEST(Unitary, RejectsNonUnitary) {
  CMatrix m = CMatrix::Identity(3, 3);
  m(0, 1) = 0.1;
  EXPECT_THROW(UnitaryOperator{m}, ValidationError);
  EXPECT_THROW(UnitaryOperator{CMatrix::Identity(3, 2)}, ValidationError);
}

TEST(Unitary, ProductAndAdjoint) {
  std::mt19937_64 rng(3);
  const UnitaryOperator u(linalg::random_unitary(rng, 3));
  const UnitaryOperator v(linalg::random_unitary(rng, 3));
  EXPECT_TRUE((u * u.adjoint()).matrix().isIdentity(1e-12));
  EXPECT_LT(((u * v).matrix() - u.matrix() * v.matrix()).norm(), 1e-14);
}

TEST(Density, ValidationReportsEachInvariant) {
  CMatrix m = CMatrix::Zero(3, 3);
  m(0, 0) = 1.2;
  m(1, 1) = -0.2;
  m(0, 1) = 0.3;
  const DensityValidation v = validate_density(m);
  EXPECT_FALSE(v.state.has_value());
  bool hermitian = false, positivity = false;
  for (const Violation& x : v.violations) {
    hermitian |= x.invariant == Invariant::kHermitian;
    positivity |= x.invariant == Invariant::kPositivity;
  }
  EXPECT_TRUE(hermitian);
  EXPECT_TRUE(positivity);
  EXPECT_THROW(DensityMatrix{m}, ValidationError);
}

TEST(Density, NanIsRejected) {
  CMatrix m = CMatrix::Identity(3, 3) / 3.0;
  m(2, 2) = std::nan("");
  EXPECT_THROW(DensityMatrix{m}, ValidationError);
}

TEST(Density, ConjugationPreservesSpectrum) {
  std::mt19937_64 rng(5);
  const DensityMatrix rho(linalg::random_density(rng, 3));
  const UnitaryOperator u(linalg::random_unitary(rng, 3));
  const DensityMatrix r2 = rho.conjugated(u);
  const auto a = linalg::hermitian_eig(rho.matrix()).values;
  const auto b = linalg::hermitian_eig(r2.matrix()).values;
  EXPECT_LT((a - b).norm(), 1e-12);
}

TEST(Expm, MatchesPadeExponential) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix h = random_hermitian(rng, 3);
    const double t = 0.37 * (trial + 1);
    const CMatrix pade = (CMatrix(-kI * t * h)).exp();
    EXPECT_LT((expm_skew(h, t).matrix() - pade).norm(), 1e-12);
  }
}

TEST(Expm, ZeroGeneratorGivesIdentity) {
  EXPECT_TRUE(expm_skew(CMatrix::Zero(3, 3), 1.0).matrix().isIdentity(1e-15));
}

TEST(Expm, NonHermitianThrows) {
  CMatrix h = CMatrix::Zero(3, 3);
  h(0, 1) = 1.0;
  EXPECT_THROW(expm_skew(h, 1.0), ValidationError);
}

TEST(Fidelity, PureStatesGiveSquaredOverlap) {
  CVector a(3), b(3);
  a << 1.0, 0.0, 0.0;
  b << std::sqrt(0.3), Complex(0.0, std::sqrt(0.7)), 0.0;
  const DensityMatrix ra = DensityMatrix::pure(a);
  const DensityMatrix rb = DensityMatrix::pure(b);
  EXPECT_NEAR(state_fidelity(ra, rb), 0.3, 1e-9);
  EXPECT_NEAR(root_fidelity(ra.matrix(), rb.matrix()), std::sqrt(0.3), 1e-9);
}

TEST(Fidelity, SymmetricAndBounded) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix r(linalg::random_density(rng, 3));
    const DensityMatrix s(linalg::random_density(rng, 3));
    const double f = state_fidelity(r, s);
    EXPECT_NEAR(f, state_fidelity(s, r), 1e-9);
    EXPECT_GE(f, -1e-12);
    EXPECT_LE(f, 1.0 + 1e-12);
    EXPECT_NEAR(state_fidelity(r, r), 1.0, 1e-9);
  }
}

TEST(Fidelity, DiagonalStatesGiveBhattacharyya) {
  const DensityMatrix r = DensityMatrix::diagonal({0.5, 0.3, 0.2});
  const DensityMatrix s = DensityMatrix::diagonal({0.1, 0.6, 0.3});
  const double bc = std::sqrt(0.05) + std::sqrt(0.18) + std::sqrt(0.06);
  EXPECT_NEAR(state_fidelity(r, s), bc * bc, 1e-12);
}

TEST(UnitaryDistance, IgnoresGlobalPhase) {
  std::mt19937_64 rng(13);
  const CMatrix u = linalg::random_unitary(rng, 3);
  EXPECT_NEAR(unitary_distance(u, std::exp(Complex(0.0, 1.3)) * u), 0.0, 1e-7);
  EXPECT_GT(unitary_distance(u, linalg::random_unitary(rng, 3)), 1e-3);
}

TEST(WalshHadamard, ElementsAreRootsOfUnity) {
  const CMatrix w = walsh_hadamard().matrix();
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      const Complex expect = std::exp(Complex(0.0, kTwoPi * j * k / 3.0)) / std::sqrt(3.0);
      EXPECT_NEAR(std::abs(w(j, k) - expect), 0.0, 1e-15);
    }
}

TEST(Device, PaperDeviceValues) {
  const DeviceSpec d = paper_device();
  d.validate();
  EXPECT_EQ(d.n_levels(), 3);
  EXPECT_NEAR(d.transition_freq(0, 1) / kTwoPi, 1.146e9, 1.0);
  EXPECT_NEAR(d.transition_freq(1, 2) / kTwoPi, 5.693e9, 1.0);
  EXPECT_EQ(d.drive_couplings(0, 2), 0.0);
  EXPECT_NEAR(d.readout.thermal_p0, 0.74, 0.0);
  EXPECT_EQ(d.decoherence.coherence_shape, CoherenceShape::kGaussian);
}

TEST(Device, ValidateRejectsBadSpecs) {
  DeviceSpec d = paper_device();
  d.level_freqs(0) = 1.0;
  EXPECT_THROW(d.validate(), ValidationError);
  d = paper_device();
  d.drive_couplings(0, 1) += 1.0;
  EXPECT_THROW(d.validate(), ValidationError);
  d = paper_device();
  d.decoherence.gamma(1, 0) = -1.0;
  EXPECT_THROW(d.validate(), ValidationError);
  d = paper_device();
  d.readout.thermal_p0 = 1.5;
  EXPECT_THROW(d.validate(), ValidationError);
}

TEST(Thermal, Populations) {
  const DensityMatrix t = thermal_state(0.74);
  EXPECT_DOUBLE_EQ(t.population(0), 0.74);
  EXPECT_NEAR(t.population(1), 0.26, 1e-15);
  EXPECT_DOUBLE_EQ(t.population(2), 0.0);
  EXPECT_EQ(thermal_state(0.9, 5).dim(), 5);
}

TEST(Linalg, LogmOfExpmRoundTrips) {
  std::mt19937_64 rng(17);
  const CMatrix h = 0.5 * random_hermitian(rng, 3);
  const CMatrix u = expm_skew(h, 1.0).matrix();
  const CMatrix g = kI * linalg::logm_unitary(u);
  EXPECT_LT((g - h).norm(), 1e-10);
}

TEST(Linalg, SqrtmSquaresBack) {
  std::mt19937_64 rng(19);
  const CMatrix rho = linalg::random_density(rng, 3);
  const CMatrix s = linalg::sqrtm_psd(rho);
  EXPECT_LT((s * s - rho).norm(), 1e-12);
}

}  // namespace
}  // namespace qutrit
