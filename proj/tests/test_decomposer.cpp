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

#include <array>
#include <cmath>
#include <random>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "qutrit/decomposer.hpp"
#include "qutrit/linalg.hpp"

namespace qutrit {
namespace {

// exp(-i diag(phi)) exp(-i G_o) with Pade exponentials, independent of the
// eigendecomposition used by the library.
CMatrix rebuild(const GateDecomposition& d) {
  CMatrix go = CMatrix::Zero(3, 3);
  go(0, 1) = d.m01;
  go(0, 2) = d.m02;
  go(1, 2) = d.m12;
  go(1, 0) = std::conj(d.m01);
  go(2, 0) = std::conj(d.m02);
  go(2, 1) = std::conj(d.m12);
  CMatrix gd = CMatrix::Zero(3, 3);
  for (int j = 0; j < 3; ++j) gd(j, j) = d.phases[static_cast<std::size_t>(j)];
  return CMatrix(-kI * gd).exp() * CMatrix(-kI * go).exp();
}

struct Row {
  Complex m01, m12, m02;
  std::array<double, 3> phi;
};

// Published decomposition table for the Walsh-Hadamard gate.
const std::array<Row, 5> kTable = {{
    {{-0.9672, -0.2365}, {1.9345, 0.0}, {-0.9672, -0.2365}, {0.8434, 0.3637, 0.3637}},
    {{-0.6982, -1.2092}, {1.3962, 0.0}, {-0.6981, -1.2092}, {1.9199, 6.1087, 6.1086}},
    {{-0.9672, -1.6753}, {0.6885, 0.7194}, {0.2788, -0.9559}, {2.4581, 0.3637, 5.0322}},
    {{0.2788, -0.9559}, {0.6885, -0.7194}, {-0.9672, -1.6753}, {2.4581, 5.0322, 0.3637}},
    {{0.3491, 0.6046}, {-0.6981, 0.0}, {0.3491, 0.6046}, {6.1086, 4.0143, 4.0143}},
}};

bool matches(const GateDecomposition& d, const Row& r, double tol) {
  auto close = [tol](Complex a, Complex b) {
    return std::abs(a.real() - b.real()) <= tol && std::abs(a.imag() - b.imag()) <= tol;
  };
  if (!close(d.m01, r.m01) || !close(d.m12, r.m12) || !close(d.m02, r.m02)) return false;
  for (int j = 0; j < 3; ++j) {
    const double diff = std::remainder(d.phases[static_cast<std::size_t>(j)] - r.phi[static_cast<std::size_t>(j)], kTwoPi);
    if (std::abs(diff) > tol) return false;
  }
  return true;
}

class WalshHadamardSearch : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { found_ = search_decompositions(walsh_hadamard()); }
  static std::vector<GateDecomposition> found_;
};
std::vector<GateDecomposition> WalshHadamardSearch::found_;

TEST_F(WalshHadamardSearch, FindsFiveDistinctSolutions) { EXPECT_EQ(found_.size(), 5u); }

TEST_F(WalshHadamardSearch, EveryTableRowIsFound) {
  for (const Row& r : kTable) {
    int hits = 0;
    for (const GateDecomposition& d : found_) hits += matches(d, r, 1e-3);
    EXPECT_EQ(hits, 1);
  }
}

TEST_F(WalshHadamardSearch, EachSolutionReconstructsTheGate) {
  const CMatrix wh = walsh_hadamard().matrix();
  for (const GateDecomposition& d : found_) {
    EXPECT_LE(unitary_distance(rebuild(d), wh), 1e-6);
    const CMatrix u = d.reconstruct().matrix();
    const Complex overlap = (wh.adjoint() * u).trace();
    EXPECT_LT((u - overlap / std::abs(overlap) * wh).norm(), 1e-9);
    EXPECT_FALSE(d.degenerate_branch);
  }
}

TEST_F(WalshHadamardSearch, OffDiagonalGeneratorHasZeroDiagonal) {
  for (const GateDecomposition& d : found_) {
    const CMatrix g = d.offdiagonal_generator();
    EXPECT_LT(linalg::hermiticity_error(g), 1e-14);
    for (int j = 0; j < 3; ++j) EXPECT_LT(std::abs(g(j, j)), 1e-9);
  }
}

TEST_F(WalshHadamardSearch, SortedByM02AndSelectsSmallest) {
  for (std::size_t i = 1; i < found_.size(); ++i)
    EXPECT_LE(std::abs(found_[i - 1].m02), std::abs(found_[i].m02) + 1e-9);
  const GateDecomposition sel = select_decomposition(found_);
  EXPECT_TRUE(matches(sel, kTable[4], 1e-3));
}

TEST_F(WalshHadamardSearch, Deterministic) {
  const auto again = search_decompositions(walsh_hadamard());
  ASSERT_EQ(again.size(), found_.size());
  for (std::size_t i = 0; i < again.size(); ++i) EXPECT_EQ(again[i].phases, found_[i].phases);
}

TEST(Search, CoarseGridMissesSolutions) {
  DecompositionSearchConfig cfg;
  cfg.grid_points = 10;
  EXPECT_LT(search_decompositions(walsh_hadamard(), cfg).size(), 5u);
}

TEST(Search, IdentityHasTheTrivialSolution) {
  const auto found = search_decompositions(UnitaryOperator::identity(3));
  ASSERT_FALSE(found.empty());
  const GateDecomposition d = select_decomposition(found);
  EXPECT_LT(std::abs(d.m01) + std::abs(d.m12) + std::abs(d.m02), 1e-9);
}

TEST(Search, RandomUnitariesReconstruct) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 3; ++i) {
    const UnitaryOperator u(linalg::random_unitary(rng, 3));
    for (const GateDecomposition& d : search_decompositions(u)) EXPECT_LE(unitary_distance(rebuild(d), u.matrix()), 1e-6);
  }
}

TEST(Search, RejectsWrongDimensionAndBadConfig) {
  EXPECT_THROW(search_decompositions(UnitaryOperator::identity(2)), ValidationError);
  DecompositionSearchConfig cfg;
  cfg.grid_points = 1;
  EXPECT_THROW(cfg.validate(), ValidationError);
  EXPECT_THROW(select_decomposition({}), ValidationError);
}

TEST(Extraction, FlagsEigenvalueAtMinusOne) {
  CVector plus = CVector::Zero(3);
  plus(0) = plus(1) = 1.0 / std::sqrt(2.0);
  const CMatrix u = CMatrix::Identity(3, 3) - 2.0 * plus * plus.adjoint();
  const OffDiagonalExtraction e = extract_offdiagonal_generator(UnitaryOperator(u));
  EXPECT_TRUE(e.degenerate);
  EXPECT_FALSE(e.accepted);
}

TEST(PulseArea, RabiTimesDurationIsTwiceElement) {
  const GateDecomposition d = select_decomposition(search_decompositions(walsh_hadamard()));
  const double T = 35e-9;
  const auto targets = pulse_area_targets(d, T);
  EXPECT_EQ(targets[0].transition, std::make_pair(0, 1));
  EXPECT_EQ(targets[1].transition, std::make_pair(1, 2));
  EXPECT_EQ(targets[2].transition, std::make_pair(0, 2));
  EXPECT_NEAR(targets[0].rabi_rate * T, 2.0 * std::abs(d.m01), 1e-12);
  EXPECT_NEAR(targets[1].rabi_rate * T, 2.0 * std::abs(d.m12), 1e-12);
  EXPECT_NEAR(targets[2].rabi_rate * T, 2.0 * std::abs(d.m02), 1e-12);
  EXPECT_NEAR(targets[2].phase, std::arg(d.m02), 1e-12);
  EXPECT_THROW(pulse_area_targets(d, 0.0), ValidationError);
}

}  // namespace
}  // namespace qutrit
