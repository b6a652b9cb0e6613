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
#include <sstream>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "qutrit/linalg.hpp"
#include "qutrit/tomography.hpp"

namespace qutrit {
namespace {

const ReadoutModel kReadout{};

TEST(Analyzers, NineUnitariesSpanTheStateSpace) {
  const AnalyzerSet a = tomography_analyzers();
  ASSERT_EQ(a.pulses.size(), 9u);
  for (const CMatrix& u : a.unitaries()) EXPECT_LT(linalg::unitarity_error(u), 1e-13);
  EXPECT_EQ(a.measurement_rank(kReadout), 9);
  EXPECT_EQ(state_preparations().pulses.size(), 9u);
}

TEST(Analyzers, LastPulseSwapsZeroAndTwo) {
  const CMatrix u = tomography_analyzers().pulses[8].unitary();
  EXPECT_NEAR(std::abs(u(0, 2)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(u(2, 0)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(u(1, 1)), 1.0, 1e-12);
}

TEST(Analyzers, PreparationsReachIntendedStates) {
  const auto p = state_preparations().unitaries();
  EXPECT_TRUE(p[0].isIdentity(1e-15));
  EXPECT_NEAR(std::norm(p[1](1, 0)), 1.0, 1e-12);  // |0> -> |1>
  EXPECT_NEAR(std::norm(p[2](2, 0)), 1.0, 1e-12);  // |0> -> |2>
  EXPECT_NEAR(std::norm(p[3](0, 0)), 0.5, 1e-12);
}

TEST(Analyzers, PhaseShiftEqualsMeasuringAfterDiagonalGate) {
  std::mt19937_64 rng(37);
  const std::array<double, 3> phi{0.4, 2.1, 5.0};
  CMatrix ud = CMatrix::Zero(3, 3);
  for (int j = 0; j < 3; ++j) ud(j, j) = std::exp(-kI * phi[static_cast<std::size_t>(j)]);
  const AnalyzerSet base = tomography_analyzers();
  const AnalyzerSet shifted = phase_shift_analyzers(base, phi);
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix rho = linalg::random_density(rng, 3);
    const auto a = expected_voltages(rho, shifted.unitaries(), kReadout);
    const auto b = expected_voltages(ud * rho * ud.adjoint(), base.unitaries(), kReadout);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-13);
  }
}

TEST(Homodyne, NoiseIsSeededAndCentered) {
  ReadoutModel r;
  r.noise_sigma = 1e-2;
  const CMatrix rho = thermal_state(0.74).matrix();
  const CMatrix u = CMatrix::Identity(3, 3);
  EXPECT_EQ(simulate_homodyne(rho, u, r, true, 5), simulate_homodyne(rho, u, r, true, 5));
  EXPECT_NE(simulate_homodyne(rho, u, r, true, 5), simulate_homodyne(rho, u, r, true, 6));
  double sum = 0.0;
  for (std::uint64_t s = 0; s < 4000; ++s) sum += simulate_homodyne(rho, u, r, true, s);
  EXPECT_NEAR(sum / 4000.0, 0.74 - 0.26, 5e-4 * 4.0);
  EXPECT_NEAR(simulate_homodyne(rho, u, r, false, 5), 0.48, 1e-14);
}

TEST(Cholesky, RoundTripsFullRankStates) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 10; ++i) {
    const CMatrix rho = linalg::random_density(rng, 3);
    EXPECT_LT((cholesky_state(cholesky_params(rho)) - rho).norm(), 1e-7);
  }
}

TEST(Cholesky, AnyParametersGiveAPhysicalState) {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> g;
  for (int i = 0; i < 50; ++i) {
    RVector t(9);
    for (int k = 0; k < 9; ++k) t(k) = g(rng);
    const DensityValidation v = validate_density(cholesky_state(t));
    EXPECT_TRUE(v.accepted());
  }
}

TEST(StateMle, NoiselessRoundTrip) {
  std::mt19937_64 rng(47);
  const auto us = tomography_analyzers().unitaries();
  for (int i = 0; i < 10; ++i) {
    const CMatrix rho = linalg::random_density(rng, 3);
    const StateEstimate e = mle_state(expected_voltages(rho, us, kReadout), us, kReadout);
    EXPECT_GE(state_fidelity(e.rho, DensityMatrix(rho)), 0.999);
  }
}

TEST(StateMle, PureStateOnTheBoundary) {
  CVector psi(3);
  psi << 1.0, Complex(0.0, 1.0), -1.0;
  psi.normalize();
  const auto us = tomography_analyzers().unitaries();
  const DensityMatrix rho = DensityMatrix::pure(psi);
  StateMleOptions o;
  o.likelihood = Likelihood::kL2;
  const StateEstimate e = mle_state(expected_voltages(rho.matrix(), us, kReadout), us, kReadout, o);
  EXPECT_GE(state_fidelity(e.rho, rho), 0.999);
}

TEST(StateMle, NoisyDataStaysPhysicalAndClose) {
  std::mt19937_64 rng(53);
  ReadoutModel r;
  r.noise_sigma = 5e-3;
  const auto us = tomography_analyzers().unitaries();
  const CMatrix rho = linalg::random_density(rng, 3);
  std::vector<double> v;
  for (std::size_t i = 0; i < us.size(); ++i) v.push_back(simulate_homodyne(rho, us[i], r, true, 100 + i));
  const StateEstimate e = mle_state(v, us, r);
  EXPECT_GE(state_fidelity(e.rho, DensityMatrix(rho)), 0.95);
}

TEST(StateMle, LinearInversionIsExactWithoutNoise) {
  std::mt19937_64 rng(59);
  const auto us = tomography_analyzers().unitaries();
  const CMatrix rho = linalg::random_density(rng, 3);
  EXPECT_LT((linear_inversion_state(expected_voltages(rho, us, kReadout), us, kReadout) - rho).norm(), 1e-10);
}

TEST(StateMle, RejectsMismatchedInput) {
  const auto us = tomography_analyzers().unitaries();
  EXPECT_THROW(mle_state({0.1, 0.2}, us, kReadout), ValidationError);
  const std::vector<CMatrix> few(us.begin(), us.begin() + 4);
  EXPECT_THROW(mle_state({0.1, 0.2, 0.3, 0.4}, few, kReadout), ValidationError);
}

TEST(Basis, GellMannOrthogonality) {
  const OperatorBasis b = build_operator_basis();
  EXPECT_TRUE(b.elements[0].isIdentity(1e-15));
  EXPECT_LT((b.gram() - 3.0 * RMatrix::Identity(9, 9)).norm(), 1e-13);
  for (const CMatrix& e : b.elements) EXPECT_LT(linalg::hermiticity_error(e), 1e-15);
  std::mt19937_64 rng(61);
  const CMatrix a = linalg::random_unitary(rng, 3);
  const CVector c = b.coefficients(a);
  CMatrix back = CMatrix::Zero(3, 3);
  for (int m = 0; m < 9; ++m) back += c(m) * b.elements[static_cast<std::size_t>(m)];
  EXPECT_LT((back - a).norm(), 1e-13);
  EXPECT_TRUE(b == build_operator_basis());
}

TEST(Process, IdealChiActsAsTheUnitary) {
  std::mt19937_64 rng(67);
  const OperatorBasis b = build_operator_basis();
  const UnitaryOperator u(linalg::random_unitary(rng, 3));
  const ProcessMatrix chi = ideal_chi(u, b);
  const CMatrix rho = linalg::random_density(rng, 3);
  EXPECT_LT((chi.apply(rho) - u.matrix() * rho * u.matrix().adjoint()).norm(), 1e-12);
  EXPECT_NEAR(chi.chi.trace().real(), 1.0, 1e-12);
  EXPECT_NEAR(process_fidelity(chi, chi), 1.0, 1e-9);
  EXPECT_LT(process_fidelity(chi, ideal_chi(UnitaryOperator::identity(3), b)), 0.99);
}

TEST(Process, RecordsMatchDirectSimulation) {
  std::mt19937_64 rng(71);
  const OperatorBasis b = build_operator_basis();
  const UnitaryOperator u(linalg::random_unitary(rng, 3));
  const auto preps = state_preparations().unitaries();
  const auto an = tomography_analyzers().unitaries();
  const CMatrix rho0 = thermal_state(0.74).matrix();
  const RMatrix m = process_records(ideal_chi(u, b), preps, an, kReadout, rho0);
  for (std::size_t j = 0; j < preps.size(); ++j) {
    const CMatrix out = u.matrix() * preps[j] * rho0 * preps[j].adjoint() * u.matrix().adjoint();
    const auto v = expected_voltages(out, an, kReadout);
    for (std::size_t i = 0; i < an.size(); ++i)
      EXPECT_NEAR(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), v[i], 1e-12);
  }
}

TEST(Process, MleRecoversUnitaryChannel) {
  std::mt19937_64 rng(73);
  const OperatorBasis b = build_operator_basis();
  const auto preps = state_preparations().unitaries();
  const auto an = tomography_analyzers().unitaries();
  const CMatrix rho0 = thermal_state(0.74).matrix();
  for (int i = 0; i < 2; ++i) {
    const UnitaryOperator u(linalg::random_unitary(rng, 3));
    const ProcessMatrix chi = ideal_chi(u, b);
    const ProcessEstimate e = process_mle(process_records(chi, preps, an, kReadout, rho0), preps, an, kReadout, b, rho0);
    EXPECT_GE(process_fidelity(e.process, chi), 0.999);
    EXPECT_NEAR(e.process.chi.trace().real(), 1.0, 1e-9);
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<CMatrix>(e.process.chi).eigenvalues().minCoeff(), -1e-9);
  }
}

TEST(Process, DeficientAnalyzersAreRejected) {
  const OperatorBasis b = build_operator_basis();
  const auto preps = state_preparations().unitaries();
  const std::vector<CMatrix> an(9, CMatrix::Identity(3, 3));
  const RMatrix m = RMatrix::Zero(9, 9);
  EXPECT_THROW(process_mle(m, preps, an, kReadout, b, thermal_state(0.74).matrix()), ValidationError);
}

TEST(Calibration, ThermalPopulationsFromRabiAmplitudes) {
  const ThermalPopulations p = thermal_populations(0.74, 0.26);
  EXPECT_NEAR(p.p0, 0.74, 1e-12);
  EXPECT_NEAR(p.p1, 0.26, 1e-12);
  EXPECT_THROW(thermal_populations(0.0, 0.3), ValidationError);
}

TEST(Calibration, VoltageLevelsRoundTrip) {
  const double p0 = 0.74, p1 = 0.26;
  const std::array<double, 3> v{1.3e-3, -0.8e-3, 0.25e-3};
  const double th = p0 * v[0] + p1 * v[1];
  const double s01 = p1 * v[0] + p0 * v[1];
  const double s0112 = p1 * v[0] + p0 * v[2];
  const auto out = solve_voltage_levels(th, s01, s0112, p0);
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(out[static_cast<std::size_t>(j)], v[static_cast<std::size_t>(j)], 1e-12);
  EXPECT_THROW(solve_voltage_levels(th, s01, s0112, 0.5), ValidationError);
}

TEST(Records, CsvRoundTripSkipsComments) {
  const std::vector<VoltageRecord> recs{{0, 0, 1e-3}, {0, 1, -2.5e-4}, {1, 0, 3.125e-5}};
  std::ostringstream os;
  os << "# manifest line\n";
  write_records_csv(os, recs);
  std::istringstream in(os.str());
  const auto back = read_records_csv(in);
  ASSERT_EQ(back.size(), recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(back[i].prep_index, recs[i].prep_index);
    EXPECT_EQ(back[i].analyzer_index, recs[i].analyzer_index);
    EXPECT_DOUBLE_EQ(back[i].voltage, recs[i].voltage);
  }
}

TEST(Records, MalformedInputIsRejected) {
  std::istringstream bad_header("prep,analyzer,v\n0,0,1\n");
  EXPECT_THROW(read_records_csv(bad_header), ValidationError);
  std::istringstream bad_row(std::string(kRecordCsvHeader) + "\n0;0;1\n");
  EXPECT_THROW(read_records_csv(bad_row), ValidationError);
  std::istringstream empty("");
  EXPECT_THROW(read_records_csv(empty), ValidationError);
}

TEST(Records, AssembleListsEveryMissingPair) {
  std::vector<VoltageRecord> recs;
  for (int p = 0; p < 2; ++p)
    for (int a = 0; a < 3; ++a)
      if (!(p == 1 && a == 2) && !(p == 0 && a == 1)) recs.push_back({p, a, 0.1});
  try {
    assemble_records(recs, 2, 3);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("(0,1)"), std::string::npos);
    EXPECT_NE(msg.find("(1,2)"), std::string::npos);
  }
  recs.push_back({0, 1, 0.2});
  recs.push_back({1, 2, 0.3});
  const RMatrix m = assemble_records(recs, 2, 3);
  EXPECT_DOUBLE_EQ(m(2, 1), 0.3);
  recs.push_back({1, 2, 0.3});
  EXPECT_THROW(assemble_records(recs, 2, 3), ValidationError);
}

}  // namespace
}  // namespace qutrit
