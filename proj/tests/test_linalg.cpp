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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qpm/linalg.hpp"

using namespace qpm;

namespace {

ComplexMatrix random_complex(std::mt19937_64& rng, Index r, Index c) {
  std::normal_distribution<double> g;
  ComplexMatrix m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = {g(rng), g(rng)};
  return m;
}

ComplexMatrix random_hermitian(std::mt19937_64& rng, Index n) {
  const ComplexMatrix z = random_complex(rng, n, n);
  return (z + z.adjoint()) / 2.0;
}

}  // namespace

TEST(HermitianInner, IdentityAndNorm) {
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  EXPECT_DOUBLE_EQ(hermitian_inner(i2, i2).real(), 2.0);
  std::mt19937_64 rng(1);
  const ComplexMatrix c = random_complex(rng, 3, 3);
  const Complex cc = hermitian_inner(c, c);
  EXPECT_NEAR(cc.imag(), 0.0, 1e-12);
  EXPECT_NEAR(cc.real(), c.squaredNorm(), 1e-12);
  EXPECT_NEAR(hs_norm(c), c.norm(), 1e-12);
}

TEST(HermitianInner, MatchesExplicitDoubleSum) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix c = random_complex(rng, 3, 3), d = random_complex(rng, 3, 3);
    Complex sum = 0.0;
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 3; ++j) sum += std::conj(c(j, i)) * d(j, i);  // Σ_i (C* D)_ii
    EXPECT_NEAR(std::abs(hermitian_inner(c, d) - sum), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(hermitian_inner(c, d) - (c.adjoint() * d).trace()), 0.0, 1e-12);
  }
}

TEST(HermitianInner, ConjugateSymmetricAndSesquilinear) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix c = random_complex(rng, 4, 4), d = random_complex(rng, 4, 4),
                        e = random_complex(rng, 4, 4);
    const Complex a{std::normal_distribution<double>()(rng), std::normal_distribution<double>()(rng)};
    EXPECT_LE(std::abs(hermitian_inner(c, d) - std::conj(hermitian_inner(d, c))), 1e-12);
    EXPECT_LE(std::abs(hermitian_inner(c, (a * d + e).eval()) - a * hermitian_inner(c, d) -
                       hermitian_inner(c, e)),
              1e-12 * (1 + std::abs(a)) * 10);
    EXPECT_LE(std::abs(hermitian_inner((a * c).eval(), d) - std::conj(a) * hermitian_inner(c, d)), 1e-11);
  }
}

TEST(HermitianInner, ShapeMismatchThrows) {
  EXPECT_THROW(hermitian_inner(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3)),
               DimensionError);
}

TEST(HermitianMatrix, RejectsNonHermitian) {
  ComplexMatrix m(2, 2);
  m << 1, 2, 0, 1;
  EXPECT_THROW(HermitianMatrix::from(m), ValidationError);
  m(1, 0) = 2;
  EXPECT_NO_THROW(HermitianMatrix::from(m));
}

TEST(Spectral, DiagonalInput) {
  RealVector d(3);
  d << 3, -1, 0;
  const auto sd = spectral_decompose(HermitianMatrix::diagonal(d));
  EXPECT_DOUBLE_EQ(sd.eigenvalues(0), 3.0);
  EXPECT_NEAR(sd.eigenvalues(1), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(sd.eigenvalues(2), -1.0);
  EXPECT_NEAR(std::abs(sd.eigenvectors(0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(sd.eigenvectors(2, 1)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(sd.eigenvectors(1, 2)), 1.0, 1e-15);
}

TEST(Spectral, PauliX) {
  RealMatrix x(2, 2);
  x << 0, 1, 1, 0;
  const auto sd = spectral_decompose(HermitianMatrix::from_real(x));
  EXPECT_NEAR(sd.eigenvalues(0), 1.0, 1e-15);
  EXPECT_NEAR(sd.eigenvalues(1), -1.0, 1e-15);
}

TEST(Spectral, ReconstructionTraceAndDiagonalization) {
  std::mt19937_64 rng(4);
  for (Index n : {1, 2, 4, 7, 16, 32}) {
    const auto h = HermitianMatrix::from(random_hermitian(rng, n));
    const auto sd = spectral_decompose(h);
    EXPECT_LE((sd.reconstruct() - h.matrix()).norm(), 1e-10) << n;
    EXPECT_NEAR(sd.eigenvalues.sum(), h.trace(), 1e-10);
    // U Q U* is diagonal with U = V*.
    const ComplexMatrix u = sd.eigenvectors.adjoint();
    const ComplexMatrix diag = u * h.matrix() * u.adjoint();
    EXPECT_LE((diag - ComplexMatrix(sd.eigenvalues.cast<Complex>().asDiagonal())).norm(), 1e-10);
    for (Index i = 1; i < n; ++i) EXPECT_GE(sd.eigenvalues(i - 1), sd.eigenvalues(i));
  }
}

TEST(Spectral, DegenerateClustersAreDeterministic) {
  std::mt19937_64 rng(5);
  const ComplexMatrix u = oracle::haar_unitary(rng, 4);
  RealVector d(4);
  d << 2, 2, 1, 1;
  const ComplexMatrix q = u * d.cast<Complex>().asDiagonal() * u.adjoint();
  const auto a = spectral_decompose(HermitianMatrix::from((q + q.adjoint()) / 2.0));
  const auto b = spectral_decompose(HermitianMatrix::from((q + q.adjoint()) / 2.0));
  EXPECT_EQ((a.eigenvectors - b.eigenvectors).norm(), 0.0);
  EXPECT_LE((a.eigenvectors.adjoint() * a.eigenvectors - ComplexMatrix::Identity(4, 4)).norm(), 1e-10);
  EXPECT_LE((a.reconstruct() - q).norm(), 1e-10);
}

TEST(Nonnegative, Examples) {
  std::mt19937_64 rng(6);
  const ComplexVector u = oracle::random_unit_vector(rng, 4) * 3.0;
  EXPECT_TRUE(is_nonnegative(HermitianMatrix::from(u * u.adjoint())));
  RealVector bell(5);
  bell << -1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3;
  EXPECT_FALSE(is_nonnegative(HermitianMatrix::diagonal(bell)));
  const ComplexMatrix b = random_complex(rng, 5, 5);
  EXPECT_TRUE(is_nonnegative(HermitianMatrix::from(b.adjoint() * b)));
}

TEST(Nonnegative, AgreesWithRandomQuadraticForms) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    // Shift so that roughly half the samples are PSD.
    ComplexMatrix h = random_hermitian(rng, 5);
    h += ComplexMatrix::Identity(5, 5) * (trial % 2 == 0 ? 3.0 : 0.0);
    const auto q = HermitianMatrix::from(h);
    bool sampled_ok = true;
    for (int k = 0; k < 1000; ++k) {
      const ComplexVector u = oracle::random_unit_vector(rng, 5);
      if ((u.adjoint() * h * u)(0, 0).real() < -1e-9) sampled_ok = false;
    }
    // Sampling can miss a thin negative cone; a negative sample is conclusive.
    if (!sampled_ok) EXPECT_FALSE(is_nonnegative(q));
    if (is_nonnegative(q)) EXPECT_TRUE(sampled_ok);
    EXPECT_EQ(is_nonnegative(q), min_eigenvalue(q) >= -1e-9);
  }
}

TEST(Unitary, Examples) {
  EXPECT_TRUE(is_unitary(ComplexMatrix::Identity(3, 3)));
  for (double theta : {0.0, 0.3, 1.7, 3.1}) {
    ComplexMatrix d = ComplexMatrix::Identity(2, 2);
    d(1, 1) = std::polar(1.0, theta);
    EXPECT_TRUE(is_unitary(d));
  }
  EXPECT_FALSE(is_unitary(2.0 * ComplexMatrix::Identity(2, 2)));
  EXPECT_THROW(is_unitary(ComplexMatrix::Zero(2, 3)), DimensionError);
  std::mt19937_64 rng(8);
  EXPECT_TRUE(is_unitary(oracle::haar_unitary(rng, 6)));
}

TEST(Density, PureStates) {
  ComplexVector e1 = ComplexVector::Zero(3);
  e1(0) = 1.0;
  const auto d = pure_state_density(e1);
  EXPECT_EQ(d.kind(), DensityKind::Quantum);
  EXPECT_DOUBLE_EQ(d.matrix()(0, 0).real(), 1.0);
  EXPECT_DOUBLE_EQ(d.matrix().cwiseAbs().sum(), 1.0);
  ComplexVector h(2);
  h << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  EXPECT_LE((pure_state_density(h).matrix() - ComplexMatrix::Constant(2, 2, 0.5)).norm(), 1e-15);
  EXPECT_THROW(pure_state_density(2.0 * h), ValidationError);

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = pure_state_density(oracle::random_unit_vector(rng, 5));
    EXPECT_TRUE(Density::check(p.matrix(), DensityKind::Quantum).ok());
    const auto sd = spectral_decompose(p.hermitian());
    EXPECT_NEAR(sd.eigenvalues(0), 1.0, 1e-10);
    EXPECT_LE(sd.eigenvalues.tail(4).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Density, KindsAndFindings) {
  RealVector bell(5);
  bell << -1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3;
  const ComplexMatrix q = bell.cast<Complex>().asDiagonal();
  EXPECT_TRUE(Density::check(q, DensityKind::Generalized).ok());
  const auto r = Density::check(q, DensityKind::Quantum);
  EXPECT_TRUE(r.has("positivity"));
  EXPECT_THROW(Density::make(q, DensityKind::Quantum), ValidationError);
  EXPECT_TRUE(Density::check(2.0 * q, DensityKind::Generalized).has("trace"));
  ComplexMatrix nh = q;
  nh(0, 1) = 0.5;
  EXPECT_TRUE(Density::check(nh, DensityKind::Generalized).has("hermitian"));
}
