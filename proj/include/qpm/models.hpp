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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qpm/linalg.hpp"
#include "qpm/process.hpp"

namespace qpm {

/// Classical hidden Markov model. Row i of `emission` is the output
/// distribution of state i; row i of `transition` its successor distribution.
struct HmmParam {
  std::vector<std::string> states;
  Alphabet alphabet;
  RealMatrix emission;    // |S| x |Σ|
  RealVector initial;     // |S|
  RealMatrix transition;  // |S| x |S|
};

/// Finite function of a Markov chain: state i always emits labels[i].
struct FfmcParam {
  std::vector<std::string> states;
  Alphabet alphabet;
  std::vector<Symbol> labels;
  RealVector initial;
  RealMatrix transition;
};

/// Finitary parametrization p(v) = π^T M_{v1} ... M_{vt} τ.
///
/// Standard form has τ = 1, (Σ_a M_a) 1 = 1 and π·1 = 1. General form keeps
/// an explicit end vector, as produced by conversions from QPMs.
struct FinitaryParam {
  Alphabet alphabet;
  std::vector<RealMatrix> letters;  // indexed by Symbol, each d x d
  RealVector initial;
  RealVector end;

  Index dimension() const { return initial.size(); }
  /// Standard-form conditions hold within tol.
  bool is_standard(double tol = Tolerances{}.eval) const;
};

/// Edge-labelled quantum walk. Coordinate of edge (a, x) is a * K + x.
struct QrwParam {
  Alphabet alphabet;                            // graph nodes
  std::vector<std::pair<Symbol, Symbol>> edges;  // directed (a, a')
  std::vector<std::string> coins;               // X, |X| = K
  ComplexMatrix unitary;                        // k x k, k = K |Σ|
  ComplexVector initial;                        // ψ0

  std::size_t coin_count() const { return coins.size(); }
  Index edge_dim() const { return static_cast<Index>(coins.size() * alphabet.size()); }
  Index coordinate(Symbol node, std::size_t coin) const {
    return static_cast<Index>(node * coins.size() + coin);
  }
};

ValidationReport validate_hmm(const HmmParam& h, double tol = Tolerances{}.eval);
ValidationReport validate_ffmc(const FfmcParam& f, double tol = Tolerances{}.eval);
/// Shape checks, standard-form flags when requested, and the process axioms
/// up to `horizon`.
ValidationReport validate_finitary(const FinitaryParam& f, std::size_t horizon = 4,
                                   bool require_standard = false,
                                   double tol = Tolerances{}.eval);
ValidationReport validate_qrw(const QrwParam& q, const Tolerances& tol = {});

/// (M_a)_ij = e_ia m_ij with end vector 1. Throws ValidationError for an
/// invalid HMM.
FinitaryParam hmm_to_finitary(const HmmParam& h);

/// Emission matrix becomes the 0/1 indicator of the labelling function.
HmmParam ffmc_to_hmm(const FfmcParam& f);

/// π^T M_{v1} ... M_{vt} τ; ε evaluates to π·τ.
double finitary_eval(const FinitaryParam& f, const Word& v);

ProcessEvaluator finitary_process(const FinitaryParam& f);

/// Decides p_A = p_B from the representations: breadth-first search over
/// words keeps those whose joint forward vector (π_A^T M_v, π_B^T N_v) is
/// independent of the ones kept so far, and checks |p_A(v) - p_B(v)| <= tol
/// on each. Those words have length < d_A + d_B and every other forward
/// vector is a combination of theirs, so the check covers all words while
/// visiting at most (d_A + d_B) |Σ| + 1 of them.
bool finitary_equivalent(const FinitaryParam& a, const FinitaryParam& b,
                         double tol = Tolerances{}.equiv);

/// Similarity transform by diag(τ) onto end vector 1. Returns nullopt when
/// some τ_i is zero; the input is then left in general form.
std::optional<FinitaryParam> to_standard_form(const FinitaryParam& f, double tol = 1e-12);

/// Result of one walk step: node distribution of Uψ and the collapsed waves.
struct QrwStep {
  RealVector probabilities;             // indexed by node
  std::vector<ComplexVector> collapsed;  // empty vector where probability is zero

  /// Throws NumericError when the node has zero probability.
  const ComplexVector& collapse(Symbol node) const;
};

/// Applies U, reads the node distribution sum_x |(Uψ)_(a,x)|^2 and projects
/// and renormalizes onto each node's edge subspace.
QrwStep qrw_step(const QrwParam& q, const ComplexVector& psi, double tol = Tolerances{}.trace);

/// Edge coordinates of a node, K consecutive indices.
ComplexMatrix node_projector(const QrwParam& q, Symbol node);

}  // namespace qpm
