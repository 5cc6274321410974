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

#include <functional>
#include <string>
#include <vector>

#include "qpm/linalg.hpp"
#include "qpm/models.hpp"
#include "qpm/process.hpp"

namespace qpm {

enum class SubspaceKind { Diagonal, Full, General };

/// Real subspace of the Hermitian n x n matrices with a fixed basis.
/// Elements are addressed by real coordinates c, Q = Σ_i c_i Q_i.
class OperatorSubspace {
 public:
  OperatorSubspace() = default;

  /// Span of the diagonal matrix units D_1..D_n.
  static OperatorSubspace diagonal(Index n);
  /// All of H_n with the orthonormal basis E_ii, then for each i < j the pair
  /// (E_ij + E_ji)/√2, i(E_ij - E_ji)/√2.
  static OperatorSubspace full(Index n);
  /// Throws ValidationError when an element is not Hermitian or the basis is
  /// linearly dependent.
  static OperatorSubspace from_basis(std::vector<ComplexMatrix> basis,
                                     const Tolerances& tol = {});

  Index ambient_dim() const { return n_; }
  Index dim() const { return static_cast<Index>(basis_.size()); }
  SubspaceKind kind() const { return kind_; }
  const std::vector<ComplexMatrix>& basis() const { return basis_; }
  const RealVector& traces() const { return traces_; }
  const RealMatrix& gram() const { return gram_; }

  ComplexMatrix compose(const RealVector& coords) const;
  /// Least-squares coordinates of m; `residual` receives ||m - compose(c)||.
  RealVector expand(const ComplexMatrix& m, double* residual = nullptr) const;
  /// Inner product <x|y> of two elements given in coordinates.
  double inner(const RealVector& x, const RealVector& y) const { return x.dot(gram_ * y); }

 private:
  void finish();

  Index n_ = 0;
  std::vector<ComplexMatrix> basis_;
  RealMatrix gram_;
  RealVector traces_;
  Eigen::LDLT<RealMatrix> gram_solver_;
  bool orthonormal_ = false;
  SubspaceKind kind_ = SubspaceKind::General;
};

/// Linear map on an OperatorSubspace in coordinates:
/// μ(Q_i) = Σ_j coords(i, j) Q_j, so a coordinate row vector c maps to c^T A.
struct SuperOperator {
  RealMatrix coords;

  RealVector apply(const RealVector& c) const { return coords.transpose() * c; }
};

/// Coordinates of an arbitrary Hermitian-preserving map restricted to the
/// subspace. Throws ValidationError when an image leaves the subspace.
SuperOperator superoperator_from_map(const OperatorSubspace& space,
                                     const std::function<ComplexMatrix(const ComplexMatrix&)>& map,
                                     double closure_tol = Tolerances{}.closure);

/// Matrix form μ(Q) of a subspace element.
ComplexMatrix apply(const OperatorSubspace& space, const SuperOperator& op, const ComplexMatrix& q);

/// Choi matrix Σ_ij E_ij ⊗ μ(E_ij) of the complex-linear extension of μ.
/// Requires a subspace of kind Full.
ComplexMatrix choi_matrix(const OperatorSubspace& space, const SuperOperator& op);

enum class ChainKind { QMC, QPM };

const char* to_string(ChainKind kind);

/// Subspace, letter-indexed superoperators and an initial (generalized)
/// density. Whether the axioms of the declared kind hold is decided by
/// validate_chain, not at construction.
class QuantumChain {
 public:
  QuantumChain() = default;

  /// Checks shapes and that the initial density lies in the subspace.
  static QuantumChain make(Alphabet alphabet, OperatorSubspace space,
                           std::vector<SuperOperator> letter_ops, Density initial, ChainKind kind,
                           const Tolerances& tol = {});

  const Alphabet& alphabet() const { return alphabet_; }
  const OperatorSubspace& subspace() const { return space_; }
  const std::vector<SuperOperator>& letter_ops() const { return ops_; }
  const SuperOperator& op(Symbol a) const { return ops_.at(a); }
  const Density& initial() const { return initial_; }
  const RealVector& initial_coords() const { return initial_coords_; }
  ChainKind kind() const { return kind_; }

  /// μ = Σ_a μ_a
  SuperOperator total() const;
  /// Same chain started from another element of the subspace (coordinates).
  /// The coordinates must describe a trace-one element.
  QuantumChain with_initial(const RealVector& coords, DensityKind kind,
                            const Tolerances& tol = {}) const;

 private:
  Alphabet alphabet_;
  OperatorSubspace space_;
  std::vector<SuperOperator> ops_;
  Density initial_;
  RealVector initial_coords_;
  ChainKind kind_ = ChainKind::QPM;
};

struct ChainValidationOptions {
  std::size_t horizon = 6;            // exhaustive word check for QPMs
  std::size_t positivity_samples = 1000;
  std::uint64_t seed = 0x5eedULL;
  Tolerances tol{};
};

/// Trace of Q0, trace preservation of μ on every basis element, and per kind:
/// QMC positivity of Q0 plus positivity evidence for each μ_a (exact on the
/// diagonal basis, Choi-matrix complete positivity on full H_n, sampled
/// otherwise); QPM word probabilities within [-tol, 1 + tol] up to the horizon.
ValidationReport validate_chain(const QuantumChain& c, const ChainValidationOptions& opts = {});

/// tr μ_v(Q0), applying μ_{v1} first.
double chain_eval(const QuantumChain& c, const Word& v);
ProcessEvaluator chain_process(const QuantumChain& c);

/// Single-letter chain μ(Q) = U Q U*.
QuantumChain unitary_to_qmc(const ComplexMatrix& u, const Density& initial,
                            const Alphabet& alphabet = Alphabet({"a"}),
                            const Tolerances& tol = {});

/// μ_a(Q) = M_a Q M_a* on full H_n; requires Σ_a M_a* M_a = I, the
/// completeness condition under which Σ_a tr(M_a Q M_a*) = tr Q.
QuantumChain povm_to_qmc(const std::vector<ComplexMatrix>& ops, const Alphabet& alphabet,
                         const Density& initial, const Tolerances& tol = {});

/// μ_a(Q) = (P_a U) Q (P_a U)* on full H_k with Q0 = ψ0 ψ0*.
QuantumChain qrw_to_qmc(const QrwParam& q, const Tolerances& tol = {});

/// Diagonal subspace, Q0 = diag(π), μ_a(diag(x)) = diag(x^T M_a).
QuantumChain hmm_to_qmc(const HmmParam& h);

/// Row-basis construction: choose words v_i with independent normalized
/// Hankel rows p_i = p_{v_i}/p(v_i), solve τ_a p_i = Σ_j α_aij p_j and
/// p = Σ_i α0_i p_i by least squares over columns up to the horizon, and
/// return the diagonal-basis QPM with μ_a(D_i) = Σ_j α_aij D_j and
/// Q0 = diag(α0). A horizon of 0 means the parameter dimension.
QuantumChain finitary_to_qpm(const FinitaryParam& f, std::size_t horizon = 0,
                             const Tolerances& tol = {});

/// π = coordinates of Q0, A_a = coordinates of μ_a, τ_i = tr Q_i.
FinitaryParam qpm_to_finitary(const QuantumChain& c);

}  // namespace qpm
