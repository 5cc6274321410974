// Copyright 2026 The qpmkit Authors
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

#include "qpm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qpm {

bool all_finite(const ComplexMatrix& m) {
  return m.real().allFinite() && m.imag().allFinite();
}

HermitianMatrix HermitianMatrix::from(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols())
    throw ValidationError("hermitian: matrix is " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ", expected square");
  if (!all_finite(m)) throw ValidationError("hermitian: non-finite entry");
  const double defect = hermitian_defect(m);
  if (defect > tol)
    throw ValidationError("hermitian: self-adjointness defect " + format_number(defect));
  return HermitianMatrix(0.5 * (m + m.adjoint()));
}

HermitianMatrix HermitianMatrix::from_real(const RealMatrix& m, double tol) {
  return from(m.cast<Complex>(), tol);
}

HermitianMatrix HermitianMatrix::diagonal(const RealVector& d) {
  return HermitianMatrix(d.cast<Complex>().asDiagonal());
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

namespace {

void normalize_phase(Eigen::Ref<ComplexVector> v) {
  for (Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > 1e-12) {
      v *= std::conj(v(i)) / mag;
      v(i) = Complex(std::abs(v(i)), 0.0);
      return;
    }
  }
}

// Lexicographic comparison of phase-normalized vectors, component by
// component, real part before imaginary part.
bool lex_less(const ComplexVector& a, const ComplexVector& b) {
  constexpr double eps = 1e-12;
  for (Index i = 0; i < a.size(); ++i) {
    if (std::abs(a(i).real() - b(i).real()) > eps) return a(i).real() < b(i).real();
    if (std::abs(a(i).imag() - b(i).imag()) > eps) return a(i).imag() < b(i).imag();
  }
  return false;
}

}  // namespace

SpectralDecomposition spectral_decompose(const HermitianMatrix& q, const Tolerances& tol) {
  const Index n = q.dim();
  SpectralDecomposition out;
  if (n == 0) return out;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(q.matrix());
  if (solver.info() != Eigen::Success)
    throw NumericError("spectral_decompose: eigensolver did not converge");

  // Eigen returns ascending order.
  RealVector vals = solver.eigenvalues().reverse();
  ComplexMatrix vecs = solver.eigenvectors().rowwise().reverse();

  Index start = 0;
  while (start < n) {
    Index end = start + 1;
    while (end < n && vals(end - 1) - vals(end) < tol.degenerate) ++end;
    const Index len = end - start;
    if (len > 1) {
      Eigen::HouseholderQR<ComplexMatrix> qr(vecs.middleCols(start, len));
      ComplexMatrix basis = qr.householderQ() * ComplexMatrix::Identity(n, len);
      std::vector<ComplexVector> cols;
      for (Index j = 0; j < len; ++j) {
        ComplexVector c = basis.col(j);
        normalize_phase(c);
        cols.push_back(std::move(c));
      }
      std::stable_sort(cols.begin(), cols.end(),
                       [](const auto& a, const auto& b) { return lex_less(a, b); });
      for (Index j = 0; j < len; ++j) vecs.col(start + j) = cols[static_cast<size_t>(j)];
    } else {
      normalize_phase(vecs.col(start));
    }
    start = end;
  }

  out.eigenvalues = std::move(vals);
  out.eigenvectors = std::move(vecs);
  return out;
}

double min_eigenvalue(const HermitianMatrix& q) {
  if (q.dim() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(q.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericError("min_eigenvalue: eigensolver did not converge");
  return solver.eigenvalues()(0);
}

bool is_nonnegative(const HermitianMatrix& q, double tol) {
  return min_eigenvalue(q) >= -tol;
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (u.rows() != u.cols()) throw DimensionError("is_unitary: matrix is not square");
  const ComplexMatrix defect = u * u.adjoint() - ComplexMatrix::Identity(u.rows(), u.cols());
  return defect.norm() <= tol;
}

const char* to_string(DensityKind kind) {
  return kind == DensityKind::Quantum ? "quantum" : "generalized";
}

ValidationReport Density::check(const ComplexMatrix& m, DensityKind kind, const Tolerances& tol) {
  ValidationReport r;
  if (m.rows() != m.cols() || m.rows() == 0) {
    r.add("shape", "density must be a non-empty square matrix");
    return r;
  }
  if (!all_finite(m)) {
    r.add("finite", "density has non-finite entries");
    return r;
  }
  const double defect = hermitian_defect(m);
  if (defect > tol.hermitian) {
    r.add("hermitian", "self-adjointness defect " + format_number(defect));
    return r;
  }
  const auto h = HermitianMatrix::from(m, tol.hermitian);
  if (std::abs(h.trace() - 1.0) > tol.trace)
    r.add("trace", "trace is " + format_number(h.trace()) + ", expected 1");
  if (kind == DensityKind::Quantum) {
    const double lo = min_eigenvalue(h);
    if (lo < -tol.psd)
      r.add("positivity", "minimum eigenvalue " + format_number(lo) + " is negative");
  }
  return r;
}

Density Density::make(const ComplexMatrix& m, DensityKind kind, const Tolerances& tol) {
  auto report = check(m, kind, tol);
  if (!report.ok()) throw ValidationError(std::move(report));
  return Density(HermitianMatrix::from(m, tol.hermitian), kind);
}

Density pure_state_density(const ComplexVector& u, double tol) {
  if (u.size() == 0) throw ValidationError("pure_state_density: empty vector");
  if (std::abs(u.norm() - 1.0) > tol)
    throw ValidationError("pure_state_density: vector norm " + format_number(u.norm()) +
                          " is not 1");
  Tolerances t;
  t.trace = std::max(t.trace, 4 * tol);
  return Density::make(u * u.adjoint(), DensityKind::Quantum, t);
}

ComplexMatrix projector(const ComplexMatrix& cols) { return cols * cols.adjoint(); }

}  // namespace qpm
