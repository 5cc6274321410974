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

#pragma once

#include <complex>
#include <limits>

#include <Eigen/Dense>

#include "qpm/error.hpp"
#include "qpm/tolerances.hpp"

namespace qpm {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Hermitian inner product <C|D> = tr(C* D).
///
/// Works on any pair of equally shaped Eigen expressions; the result scalar
/// follows the promoted scalar type of the operands.
template <typename DerivedC, typename DerivedD>
auto hermitian_inner(const Eigen::MatrixBase<DerivedC>& c,
                     const Eigen::MatrixBase<DerivedD>& d) {
  if (c.rows() != d.rows() || c.cols() != d.cols())
    throw DimensionError("hermitian_inner: shape mismatch");
  // tr(C* D) = sum_ij conj(c_ij) d_ij
  return (c.conjugate().array() * d.array()).sum();
}

/// Frobenius norm induced by hermitian_inner.
template <typename Derived>
double hs_norm(const Eigen::MatrixBase<Derived>& c) {
  return c.norm();
}

/// Largest entrywise deviation from self-adjointness.
template <typename Derived>
double hermitian_defect(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool all_finite(const ComplexMatrix& m);

/// Square complex matrix that passed the self-adjointness check. The stored
/// matrix is the exact Hermitian part (A + A*)/2 of the validated input.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  /// Throws ValidationError on non-square, non-finite or non-Hermitian input.
  static HermitianMatrix from(const ComplexMatrix& m, double tol = Tolerances{}.hermitian);
  static HermitianMatrix from_real(const RealMatrix& m, double tol = Tolerances{}.hermitian);
  static HermitianMatrix diagonal(const RealVector& d);

  const ComplexMatrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }
  double trace() const { return m_.diagonal().real().sum(); }

 private:
  explicit HermitianMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

struct SpectralDecomposition {
  RealVector eigenvalues;     // descending
  ComplexMatrix eigenvectors; // column i belongs to eigenvalues(i)

  ComplexMatrix reconstruct() const;
};

/// Eigen-decomposition of a Hermitian matrix with deterministic ordering:
/// descending eigenvalues, each eigenvector phase-normalized so its first
/// nonzero component is real positive, and numerically degenerate clusters
/// re-orthonormalized and ordered lexicographically by component.
SpectralDecomposition spectral_decompose(const HermitianMatrix& q,
                                         const Tolerances& tol = {});

double min_eigenvalue(const HermitianMatrix& q);

/// True iff the smallest eigenvalue is >= -tol.
bool is_nonnegative(const HermitianMatrix& q, double tol = Tolerances{}.psd);

/// True iff ||UU* - I||_F <= tol. Throws DimensionError when U is not square.
bool is_unitary(const ComplexMatrix& u, double tol = Tolerances{}.unitary);

enum class DensityKind { Quantum, Generalized };

const char* to_string(DensityKind kind);

/// Trace-one Hermitian matrix. Quantum densities are additionally PSD.
class Density {
 public:
  Density() = default;

  static Density make(const ComplexMatrix& m, DensityKind kind, const Tolerances& tol = {});
  /// Validation findings without throwing.
  static ValidationReport check(const ComplexMatrix& m, DensityKind kind,
                                const Tolerances& tol = {});

  const HermitianMatrix& hermitian() const { return h_; }
  const ComplexMatrix& matrix() const { return h_.matrix(); }
  DensityKind kind() const { return kind_; }
  Index dim() const { return h_.dim(); }

 private:
  Density(HermitianMatrix h, DensityKind kind) : h_(std::move(h)), kind_(kind) {}
  HermitianMatrix h_;
  DensityKind kind_ = DensityKind::Generalized;
};

/// uu* for a unit vector u. Throws ValidationError when |‖u‖ - 1| > tol.
Density pure_state_density(const ComplexVector& u, double tol = Tolerances{}.trace);

/// Orthogonal projector onto the span of the given orthonormal columns.
ComplexMatrix projector(const ComplexMatrix& orthonormal_columns);

}  // namespace qpm
