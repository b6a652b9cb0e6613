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

#include "qutrit/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "qutrit/optimize.hpp"

namespace qutrit {
namespace {

RotationStep step(int j, int k, Axis axis, double angle) {
  return RotationStep{j, k, axis == Axis::kX ? 0.0 : 0.5 * kPi, angle};
}

// Real coordinates of a Hermitian 3x3 matrix: the 9 values Tr(H lambda_m).
RVector hermitian_coords(const CMatrix& h, const OperatorBasis& basis) {
  RVector v(9);
  for (int m = 0; m < 9; ++m) v(m) = (h * basis.elements[static_cast<std::size_t>(m)]).trace().real();
  return v;
}

int real_rank(const RMatrix& a, double rel_tol = 1e-9) {
  Eigen::JacobiSVD<RMatrix> svd(a);
  const RVector s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

std::vector<CMatrix> measurement_operators(const std::vector<CMatrix>& analyzers, const ReadoutModel& readout) {
  const CMatrix v = readout.voltage_operator(3);
  std::vector<CMatrix> out;
  out.reserve(analyzers.size());
  for (const CMatrix& u : analyzers) {
    if (u.rows() != 3 || u.cols() != 3) throw ValidationError("analyzers must be 3x3");
    out.push_back(u.adjoint() * v * u);
  }
  return out;
}

// T lower triangular (dim x dim) from dim^2 reals: diagonal first, then the
// strictly lower elements row by row as (re, im) pairs.
CMatrix lower_factor(const RVector& p, Eigen::Index dim) {
  CMatrix t = CMatrix::Zero(dim, dim);
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < dim; ++i) t(i, i) = p(idx++);
  for (Eigen::Index i = 1; i < dim; ++i)
    for (Eigen::Index j = 0; j < i; ++j) {
      t(i, j) = Complex(p(idx), p(idx + 1));
      idx += 2;
    }
  return t;
}

RVector lower_params(const CMatrix& t) {
  const Eigen::Index dim = t.rows();
  RVector p(dim * dim);
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < dim; ++i) p(idx++) = t(i, i).real();
  for (Eigen::Index i = 1; i < dim; ++i)
    for (Eigen::Index j = 0; j < i; ++j) {
      p(idx++) = t(i, j).real();
      p(idx++) = t(i, j).imag();
    }
  return p;
}

// Lower-triangular T with T^dagger T = m for positive definite m.
CMatrix reversed_cholesky(const CMatrix& m) {
  const Eigen::Index n = m.rows();
  const CMatrix flipped = m.reverse();  // J m J
  Eigen::LLT<CMatrix> llt(flipped);
  if (llt.info() != Eigen::Success) throw NumericalError("Cholesky factorization of the initial estimate failed");
  const CMatrix l = llt.matrixL();
  CMatrix upper = l.reverse();  // J L J
  (void)n;
  return upper.adjoint();
}

CMatrix normalized_gram(const CMatrix& t) {
  const CMatrix s = t.adjoint() * t;
  const double tr = s.trace().real();
  if (!(tr > 0.0)) return CMatrix::Identity(t.rows(), t.cols()) / static_cast<double>(t.rows());
  return s / tr;
}

CMatrix regularize(const CMatrix& rho, double eps) {
  const Eigen::Index n = rho.rows();
  return (1.0 - eps) * linalg::project_to_density(rho) + eps * CMatrix::Identity(n, n) / static_cast<double>(n);
}

bool lexicographic_less(const RVector& a, const RVector& b) {
  for (Eigen::Index i = 0; i < std::min(a.size(), b.size()); ++i)
    if (a(i) != b(i)) return a(i) < b(i);
  return a.size() < b.size();
}

}  // namespace

UnitaryOperator rotation(std::pair<int, int> transition, Axis axis, double angle) {
  return UnitaryOperator(rotation_unitary(step(transition.first, transition.second, axis, angle)));
}

std::vector<CMatrix> AnalyzerSet::unitaries() const {
  std::vector<CMatrix> out;
  out.reserve(pulses.size());
  for (const Analyzer& a : pulses) out.push_back(a.unitary());
  return out;
}

int AnalyzerSet::measurement_rank(const ReadoutModel& readout) const {
  const OperatorBasis basis = build_operator_basis();
  const std::vector<CMatrix> ms = measurement_operators(unitaries(), readout);
  RMatrix a(static_cast<Eigen::Index>(ms.size()), 9);
  for (std::size_t i = 0; i < ms.size(); ++i) a.row(static_cast<Eigen::Index>(i)) = hermitian_coords(ms[i], basis);
  return real_rank(a);
}

AnalyzerSet tomography_analyzers() {
  const double pi = kPi;
  AnalyzerSet s;
  s.pulses = {
      {"u0", {step(0, 1, Axis::kX, pi)}},
      {"u1", {step(0, 1, Axis::kX, pi / 2)}},
      {"u2", {step(0, 1, Axis::kY, pi / 2)}},
      {"u3", {}},
      {"u4", {step(1, 2, Axis::kX, pi / 2), step(0, 1, Axis::kX, pi)}},
      {"u5", {step(1, 2, Axis::kY, pi / 2), step(0, 1, Axis::kX, pi)}},
      {"u6", {step(0, 1, Axis::kX, pi), step(1, 2, Axis::kX, pi / 2), step(0, 1, Axis::kX, pi)}},
      {"u7", {step(0, 1, Axis::kX, pi), step(1, 2, Axis::kY, pi / 2), step(0, 1, Axis::kX, pi)}},
      {"u8", {step(0, 1, Axis::kX, pi), step(1, 2, Axis::kX, pi), step(0, 1, Axis::kX, pi)}},
  };
  return s;
}

AnalyzerSet state_preparations() {
  const double pi = kPi;
  AnalyzerSet s;
  s.pulses = {
      {"p0", {}},
      {"p1", {step(0, 1, Axis::kX, pi)}},
      {"p2", {step(0, 1, Axis::kX, pi), step(1, 2, Axis::kX, pi)}},
      {"p3", {step(0, 1, Axis::kX, pi / 2)}},
      {"p4", {step(0, 1, Axis::kY, pi / 2)}},
      {"p5", {step(0, 1, Axis::kX, pi), step(1, 2, Axis::kX, pi / 2)}},
      {"p6", {step(0, 1, Axis::kX, pi), step(1, 2, Axis::kY, pi / 2)}},
      {"p7", {step(0, 1, Axis::kX, pi / 2), step(1, 2, Axis::kX, pi)}},
      {"p8", {step(0, 1, Axis::kY, pi / 2), step(1, 2, Axis::kX, pi)}},
  };
  return s;
}

AnalyzerSet phase_shift_analyzers(const AnalyzerSet& set, const std::array<double, 3>& phases) {
  AnalyzerSet out = set;
  for (Analyzer& a : out.pulses) {
    for (RotationStep& r : a.steps) {
      if (r.j < 0 || r.j > 2 || r.k < 0 || r.k > 2) throw ValidationError("analyzer rotation outside the qutrit");
      r.alpha -= phases[static_cast<std::size_t>(r.j)] - phases[static_cast<std::size_t>(r.k)];
    }
  }
  return out;
}

AnalyzerSet phase_shift_analyzers(const AnalyzerSet& set, const GateDecomposition& d) {
  return phase_shift_analyzers(set, d.phases);
}

// ----------------------------------------------------------------------------

double simulate_homodyne(const CMatrix& rho, const CMatrix& analyzer, const ReadoutModel& readout, bool noise,
                         std::uint64_t seed) {
  if (rho.rows() != analyzer.rows()) throw ValidationError("state and analyzer dimensions differ");
  const CMatrix v = readout.voltage_operator(rho.rows());
  double out = (analyzer * rho * analyzer.adjoint() * v).trace().real();
  if (noise && readout.noise_sigma > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, readout.noise_sigma);
    out += normal(rng);
  }
  return out;
}

std::vector<double> expected_voltages(const CMatrix& rho, const std::vector<CMatrix>& analyzers,
                                      const ReadoutModel& readout) {
  std::vector<double> out;
  out.reserve(analyzers.size());
  for (const CMatrix& u : analyzers) out.push_back(simulate_homodyne(rho, u, readout, false, 0));
  return out;
}

// ----------------------------------------------------------------------------

CMatrix cholesky_state(const RVector& t) {
  if (t.size() != 9) throw ValidationError("state Cholesky parameters must have 9 entries");
  CMatrix m = CMatrix::Zero(3, 3);
  m(0, 0) = t(0);
  m(1, 1) = t(1);
  m(2, 2) = t(2);
  m(1, 0) = Complex(t(3), t(4));
  m(2, 1) = Complex(t(5), t(6));
  m(2, 0) = Complex(t(7), t(8));
  return normalized_gram(m);
}

RVector cholesky_params(const CMatrix& rho) {
  const CMatrix t = reversed_cholesky(regularize(rho, 1e-8));
  RVector p(9);
  p << t(0, 0).real(), t(1, 1).real(), t(2, 2).real(), t(1, 0).real(), t(1, 0).imag(), t(2, 1).real(),
      t(2, 1).imag(), t(2, 0).real(), t(2, 0).imag();
  return p;
}

CMatrix linear_inversion_state(const std::vector<double>& voltages, const std::vector<CMatrix>& analyzers,
                               const ReadoutModel& readout) {
  if (voltages.size() != analyzers.size()) throw ValidationError("one voltage per analyzer is required");
  const OperatorBasis basis = build_operator_basis();
  const std::vector<CMatrix> ms = measurement_operators(analyzers, readout);
  // rho = (lambda_0 + sum_{m>0} r_m lambda_m) / 3.
  const Eigen::Index k = static_cast<Eigen::Index>(ms.size());
  RMatrix a(k, 8);
  RVector b(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const RVector c = hermitian_coords(ms[static_cast<std::size_t>(i)], basis) / 3.0;
    a.row(i) = c.tail(8).transpose();
    b(i) = voltages[static_cast<std::size_t>(i)] - c(0);
  }
  if (real_rank(a) < 8) throw ValidationError("analyzer set is not informationally complete");
  const RVector r = a.colPivHouseholderQr().solve(b);
  CMatrix rho = basis.elements[0] / 3.0;
  for (int m = 1; m < 9; ++m) rho += r(m - 1) * basis.elements[static_cast<std::size_t>(m)] / 3.0;
  return rho;
}

StateEstimate mle_state(const std::vector<double>& voltages, const std::vector<CMatrix>& analyzers,
                        const ReadoutModel& readout, const StateMleOptions& options) {
  readout.validate();
  if (voltages.size() != 9 || analyzers.size() != 9) throw ValidationError("state MLE needs 9 analyzers and 9 voltages");
  if (options.restarts < 1) throw ValidationError("state MLE needs at least one start");
  const std::vector<CMatrix> ms = measurement_operators(analyzers, readout);
  const Eigen::Index k = static_cast<Eigen::Index>(ms.size());

  auto objective = [&](const RVector& t) {
    const CMatrix rho = cholesky_state(t);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      const double r = voltages[static_cast<std::size_t>(i)] -
                       (rho.cwiseProduct(ms[static_cast<std::size_t>(i)].transpose())).sum().real();
      sum += options.likelihood == Likelihood::kL1 ? std::abs(r) : r * r;
    }
    return sum;
  };

  const RVector x0 = cholesky_params(linear_inversion_state(voltages, analyzers, readout));
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 0.1);

  optimize::NelderMeadOptions nm;
  nm.initial_step = 0.05;
  nm.x_tol = options.x_tol;
  nm.max_evaluations = options.max_evaluations;

  StateEstimate best{DensityMatrix{}, std::numeric_limits<double>::infinity(), 0, 0, RVector()};
  int evaluations = 0;
  bool any_converged = false;
  for (int s = 0; s < options.restarts; ++s) {
    RVector start = x0;
    if (s > 0)
      for (Eigen::Index i = 0; i < start.size(); ++i) start(i) += normal(rng);
    const optimize::Minimum m = optimize::nelder_mead(objective, start, nm);
    evaluations += m.evaluations;
    any_converged = any_converged || m.converged;
    const bool better = m.value < best.objective ||
                        (m.value == best.objective && lexicographic_less(m.x, best.params));
    if (better) {
      best.objective = m.value;
      best.params = m.x;
      best.iterations = m.iterations;
    }
  }
  best.evaluations = evaluations;
  const CMatrix rho = cholesky_state(best.params);
  if (!any_converged) {
    std::ostringstream msg;
    msg << "state MLE did not converge in " << options.restarts << " starts; best objective " << best.objective;
    throw NumericalError(msg.str());
  }
  DensityValidation v = validate_density(0.5 * (rho + rho.adjoint()));
  if (!v.accepted()) throw NumericalError("state MLE produced an unphysical matrix: " + v.describe());
  best.rho = *v.state;
  return best;
}

// ----------------------------------------------------------------------------

RMatrix OperatorBasis::gram() const {
  RMatrix g(9, 9);
  for (int m = 0; m < 9; ++m)
    for (int n = 0; n < 9; ++n)
      g(m, n) = (elements[static_cast<std::size_t>(m)] * elements[static_cast<std::size_t>(n)].adjoint()).trace().real();
  return g;
}

CVector OperatorBasis::coefficients(const CMatrix& a) const {
  if (a.rows() != 3 || a.cols() != 3) throw ValidationError("operator basis expansion needs a 3x3 matrix");
  CVector e(9);
  for (int m = 0; m < 9; ++m) e(m) = (elements[static_cast<std::size_t>(m)].adjoint() * a).trace() / 3.0;
  return e;
}

bool OperatorBasis::operator==(const OperatorBasis& other) const {
  for (std::size_t m = 0; m < 9; ++m)
    if (!elements[m].isApprox(other.elements[m], 1e-14)) return false;
  return true;
}

OperatorBasis build_operator_basis() {
  OperatorBasis b;
  for (CMatrix& e : b.elements) e = CMatrix::Zero(3, 3);
  b.elements[0] = CMatrix::Identity(3, 3);
  auto sym = [](CMatrix& m, int j, int k) { m(j, k) = m(k, j) = 1.0; };
  auto anti = [](CMatrix& m, int j, int k) {
    m(j, k) = -kI;
    m(k, j) = kI;
  };
  sym(b.elements[1], 0, 1);
  anti(b.elements[2], 0, 1);
  b.elements[3](0, 0) = 1.0;
  b.elements[3](1, 1) = -1.0;
  sym(b.elements[4], 0, 2);
  anti(b.elements[5], 0, 2);
  sym(b.elements[6], 1, 2);
  anti(b.elements[7], 1, 2);
  b.elements[8](0, 0) = 1.0 / std::sqrt(3.0);
  b.elements[8](1, 1) = 1.0 / std::sqrt(3.0);
  b.elements[8](2, 2) = -2.0 / std::sqrt(3.0);
  const double scale = std::sqrt(1.5);
  for (std::size_t m = 1; m < 9; ++m) b.elements[m] *= scale;
  return b;
}

CMatrix ProcessMatrix::apply(const CMatrix& rho) const {
  CMatrix out = CMatrix::Zero(3, 3);
  for (int m = 0; m < 9; ++m)
    for (int n = 0; n < 9; ++n) {
      if (chi(m, n) == Complex(0.0, 0.0)) continue;
      out += chi(m, n) * basis.elements[static_cast<std::size_t>(m)] * rho *
             basis.elements[static_cast<std::size_t>(n)].adjoint();
    }
  return out;
}

ProcessMatrix ideal_chi(const UnitaryOperator& u, const OperatorBasis& basis) {
  if (u.dim() != 3) throw ValidationError("ideal process matrix needs a 3x3 unitary");
  const CVector e = basis.coefficients(u.matrix());
  return ProcessMatrix{e * e.adjoint(), basis};
}

namespace {

// Tr(M_i lambda_m rho_j lambda_n^dagger) for every (i, j) as 9x9 blocks.
struct ProcessDesign {
  std::vector<CMatrix> coeff;  // index i * n_prep + j
  Eigen::Index n_analyzers = 0;
  Eigen::Index n_preparations = 0;

  double predict(const CMatrix& chi, Eigen::Index i, Eigen::Index j) const {
    return chi.cwiseProduct(coeff[static_cast<std::size_t>(i * n_preparations + j)]).sum().real();
  }
};

ProcessDesign make_design(const std::vector<CMatrix>& preparations, const std::vector<CMatrix>& analyzers,
                          const ReadoutModel& readout, const OperatorBasis& basis, const CMatrix& nominal) {
  const std::vector<CMatrix> ms = measurement_operators(analyzers, readout);
  ProcessDesign d;
  d.n_analyzers = static_cast<Eigen::Index>(ms.size());
  d.n_preparations = static_cast<Eigen::Index>(preparations.size());
  for (const CMatrix& m_op : ms) {
    for (const CMatrix& p : preparations) {
      if (p.rows() != 3 || p.cols() != 3) throw ValidationError("preparations must be 3x3");
      const CMatrix rho_in = p * nominal * p.adjoint();
      CMatrix c(9, 9);
      for (int m = 0; m < 9; ++m) {
        const CMatrix left = m_op * basis.elements[static_cast<std::size_t>(m)] * rho_in;
        for (int n = 0; n < 9; ++n)
          c(m, n) = (left * basis.elements[static_cast<std::size_t>(n)].adjoint()).trace();
      }
      d.coeff.push_back(std::move(c));
    }
  }
  return d;
}

struct ProcessFunctor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const ProcessDesign* design;
  const RMatrix* records;

  int inputs() const { return 81; }
  int values() const { return static_cast<int>(design->n_analyzers * design->n_preparations); }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    const CMatrix chi = normalized_gram(lower_factor(x, 9));
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < design->n_analyzers; ++i)
      for (Eigen::Index j = 0; j < design->n_preparations; ++j) f(r++) = design->predict(chi, i, j) - (*records)(i, j);
    return 0;
  }
};

}  // namespace

RMatrix process_records(const ProcessMatrix& process, const std::vector<CMatrix>& preparations,
                        const std::vector<CMatrix>& analyzers, const ReadoutModel& readout,
                        const CMatrix& nominal_state) {
  const ProcessDesign d = make_design(preparations, analyzers, readout, process.basis, nominal_state);
  RMatrix out(d.n_analyzers, d.n_preparations);
  for (Eigen::Index i = 0; i < d.n_analyzers; ++i)
    for (Eigen::Index j = 0; j < d.n_preparations; ++j) out(i, j) = d.predict(process.chi, i, j);
  return out;
}

ProcessEstimate process_mle(const RMatrix& records, const std::vector<CMatrix>& preparations,
                            const std::vector<CMatrix>& analyzers, const ReadoutModel& readout,
                            const OperatorBasis& basis, const CMatrix& nominal_state,
                            const ProcessMleOptions& options) {
  readout.validate();
  if (preparations.size() != 9 || analyzers.size() != 9 || records.rows() != 9 || records.cols() != 9)
    throw ValidationError("process MLE needs a full 9x9 record over 9 preparations and 9 analyzers");
  if (!records.allFinite()) throw ValidationError("process records must be finite");
  const DensityValidation nv = validate_density(nominal_state);
  if (!nv.accepted()) throw ValidationError("nominal state is not physical: " + nv.describe());

  // Both the prepared inputs and the measurement operators must span the
  // 9-dimensional Hermitian space.
  RMatrix in_span(9, 9);
  for (std::size_t j = 0; j < 9; ++j)
    in_span.row(static_cast<Eigen::Index>(j)) =
        hermitian_coords(preparations[j] * nominal_state * preparations[j].adjoint(), basis);
  RMatrix meas_span(9, 9);
  const std::vector<CMatrix> ms = measurement_operators(analyzers, readout);
  for (std::size_t i = 0; i < 9; ++i) meas_span.row(static_cast<Eigen::Index>(i)) = hermitian_coords(ms[i], basis);
  const int in_rank = real_rank(in_span);
  const int meas_rank = real_rank(meas_span);
  if (in_rank < 9 || meas_rank < 9) {
    std::ostringstream msg;
    msg << "process tomography design is rank deficient: prepared states span " << in_rank
        << "/9 and measurement operators span " << meas_rank << "/9 operator dimensions";
    throw ValidationError(msg.str());
  }

  const ProcessDesign design = make_design(preparations, analyzers, readout, basis, nominal_state);

  // Linear inversion over Hermitian chi.
  std::vector<CMatrix> herm;
  for (int m = 0; m < 9; ++m) {
    CMatrix e = CMatrix::Zero(9, 9);
    e(m, m) = 1.0;
    herm.push_back(e);
  }
  for (int m = 0; m < 9; ++m)
    for (int n = m + 1; n < 9; ++n) {
      CMatrix s = CMatrix::Zero(9, 9);
      s(m, n) = s(n, m) = 1.0;
      herm.push_back(s);
      CMatrix a = CMatrix::Zero(9, 9);
      a(m, n) = kI;
      a(n, m) = -kI;
      herm.push_back(a);
    }
  RMatrix a(81, 81);
  RVector b(81);
  for (Eigen::Index i = 0; i < 9; ++i)
    for (Eigen::Index j = 0; j < 9; ++j) {
      const Eigen::Index r = i * 9 + j;
      for (std::size_t c = 0; c < herm.size(); ++c) a(r, static_cast<Eigen::Index>(c)) = design.predict(herm[c], i, j);
      b(r) = records(i, j);
    }
  const RVector coef = a.colPivHouseholderQr().solve(b);
  CMatrix chi0 = CMatrix::Zero(9, 9);
  for (std::size_t c = 0; c < herm.size(); ++c) chi0 += coef(static_cast<Eigen::Index>(c)) * herm[c];
  const RVector x0 = lower_params(reversed_cholesky(regularize(chi0, 1e-8)));

  ProcessFunctor functor{&design, &records};
  Eigen::NumericalDiff<ProcessFunctor, Eigen::Central> numdiff(functor);
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 0.05);

  ProcessEstimate best{ProcessMatrix{CMatrix::Identity(9, 9) / 9.0, basis}, std::numeric_limits<double>::infinity(), 0};
  RVector best_x;
  for (int s = 0; s < std::max(1, options.restarts); ++s) {
    Eigen::VectorXd x = x0;
    if (s > 0)
      for (Eigen::Index i = 0; i < x.size(); ++i) x(i) += normal(rng);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<ProcessFunctor, Eigen::Central>> lm(numdiff);
    lm.parameters.maxfev = options.max_evaluations;
    lm.parameters.xtol = 1e-12;
    lm.parameters.ftol = 1e-14;
    lm.minimize(x);
    Eigen::VectorXd f(81);
    functor(x, f);
    const double value = f.squaredNorm();
    if (value < best.objective || (value == best.objective && lexicographic_less(x, best_x))) {
      best.objective = value;
      best.iterations = static_cast<int>(lm.iter);
      best.process.chi = normalized_gram(lower_factor(x, 9));
      best_x = x;
    }
  }
  if (!std::isfinite(best.objective)) throw NumericalError("process MLE failed to produce a finite objective");
  best.process.chi = 0.5 * (best.process.chi + best.process.chi.adjoint());
  return best;
}

double process_fidelity(const ProcessMatrix& chi, const ProcessMatrix& chi_ideal) {
  if (!(chi.basis == chi_ideal.basis)) throw ValidationError("process matrices use different operator bases");
  if (chi.chi.rows() != 9 || chi_ideal.chi.rows() != 9) throw ValidationError("process matrices must be 9x9");
  return std::clamp(root_fidelity(chi_ideal.chi, chi.chi), 0.0, 1.0);
}

// ----------------------------------------------------------------------------

ThermalPopulations thermal_populations(double rabi_amp_swap12, double rabi_amp_swap02) {
  if (!(rabi_amp_swap12 > 0.0)) throw ValidationError("swap-12 Rabi amplitude must be positive (zero denominator)");
  if (!(rabi_amp_swap02 >= 0.0)) throw ValidationError("swap-02 Rabi amplitude must be non-negative");
  const double r = rabi_amp_swap02 / rabi_amp_swap12;
  return ThermalPopulations{1.0 / (1.0 + r), r / (1.0 + r)};
}

std::array<double, 3> solve_voltage_levels(double v_thermal, double v_swap01, double v_swap01_12, double p_th0) {
  if (!(p_th0 >= 0.0 && p_th0 <= 1.0)) throw ValidationError("P_th0 must be a probability");
  const double p1 = 1.0 - p_th0;
  Eigen::Matrix3d a;
  a << p_th0, p1, 0.0, p1, p_th0, 0.0, p1, 0.0, p_th0;
  if (std::abs(a.determinant()) < 1e-12)
    throw ValidationError("voltage-level system is singular (P_th0 = 0.5 or 0)");
  const Eigen::Vector3d v = a.partialPivLu().solve(Eigen::Vector3d(v_thermal, v_swap01, v_swap01_12));
  return {v(0), v(1), v(2)};
}

// ----------------------------------------------------------------------------

std::vector<VoltageRecord> read_records_csv(std::istream& in) {
  auto trim = [](std::string s) {
    s.erase(0, s.find_first_not_of(" \t\r"));
    s.erase(s.find_last_not_of(" \t\r") + 1);
    return s;
  };
  std::string line;
  int line_no = 0;
  do {
    if (!std::getline(in, line)) throw ValidationError("record file has no header");
    ++line_no;
  } while (trim(line).empty() || trim(line).front() == '#');
  if (trim(line) != kRecordCsvHeader)
    throw ValidationError(std::string("record file header must be '") + kRecordCsvHeader + "'");
  std::vector<VoltageRecord> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    std::istringstream ss(line);
    VoltageRecord r;
    char c1 = 0, c2 = 0;
    if (!(ss >> r.prep_index >> c1 >> r.analyzer_index >> c2 >> r.voltage) || c1 != ',' || c2 != ',') {
      std::ostringstream msg;
      msg << "malformed record on line " << line_no;
      throw ValidationError(msg.str());
    }
    std::string rest;
    if (ss >> rest) {
      std::ostringstream msg;
      msg << "trailing data on line " << line_no;
      throw ValidationError(msg.str());
    }
    out.push_back(r);
  }
  return out;
}

void write_records_csv(std::ostream& out, const std::vector<VoltageRecord>& records) {
  out << kRecordCsvHeader << '\n' << std::setprecision(17);
  for (const VoltageRecord& r : records) out << r.prep_index << ',' << r.analyzer_index << ',' << r.voltage << '\n';
}

RMatrix assemble_records(const std::vector<VoltageRecord>& records, int n_preparations, int n_analyzers) {
  RMatrix m = RMatrix::Constant(n_analyzers, n_preparations, std::numeric_limits<double>::quiet_NaN());
  for (const VoltageRecord& r : records) {
    if (r.prep_index < 0 || r.prep_index >= n_preparations || r.analyzer_index < 0 || r.analyzer_index >= n_analyzers) {
      std::ostringstream msg;
      msg << "record (" << r.prep_index << ", " << r.analyzer_index << ") is out of range";
      throw ValidationError(msg.str());
    }
    if (!std::isfinite(r.voltage)) throw ValidationError("record voltages must be finite");
    if (!std::isnan(m(r.analyzer_index, r.prep_index))) {
      std::ostringstream msg;
      msg << "duplicate record (" << r.prep_index << ", " << r.analyzer_index << ")";
      throw ValidationError(msg.str());
    }
    m(r.analyzer_index, r.prep_index) = r.voltage;
  }
  std::ostringstream missing;
  int count = 0;
  for (int p = 0; p < n_preparations; ++p)
    for (int a = 0; a < n_analyzers; ++a)
      if (std::isnan(m(a, p))) missing << (count++ ? " " : "") << '(' << p << ',' << a << ')';
  if (count > 0) throw ValidationError("missing records (prep, analyzer): " + missing.str());
  return m;
}

}  // namespace qutrit
