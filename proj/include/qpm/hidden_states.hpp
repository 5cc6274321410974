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
#include <vector>

#include "qpm/linalg.hpp"
#include "qpm/quantum_chain.hpp"

namespace qpm {

/// Hidden states Ω as orthogonal projectors that resolve the identity.
struct HiddenStateBasis {
  std::vector<std::string> labels;
  std::vector<ComplexMatrix> projectors;

  /// Rank-one coordinate projectors e_i e_i*, labelled w1..wn unless labels
  /// are given. These are eigenprojectors of every diagonal density.
  static HiddenStateBasis standard(Index n, std::vector<std::string> labels = {});
  /// One projector per eigenspace of q (eigenvalues closer than
  /// tol.degenerate share a projector), in descending eigenvalue order.
  static HiddenStateBasis from_density(const Density& q, const Tolerances& tol = {});

  std::size_t size() const { return projectors.size(); }
  Index dim() const { return projectors.empty() ? 0 : projectors.front().rows(); }
  std::size_t index_of(const std::string& label) const;

  /// Idempotence, mutual orthogonality and Σ P P* = I.
  ValidationReport validate(double tol = 1e-9) const;
};

/// q_ω = tr(P_ω Q P_ω*). May be negative for generalized densities.
RealVector hidden_state_weights(const Density& q, const HiddenStateBasis& basis);

/// Deterministic map Ω -> Σ_X.
struct InformationFunction {
  std::string name;
  std::vector<std::string> codomain;  // ordered value set
  std::vector<std::size_t> values;    // per hidden state, index into codomain

  /// Codomain is the image, sorted numerically when every value is numeric
  /// ("+" and "-" count as +1 and -1), otherwise in first-appearance order.
  static InformationFunction from_values(std::string name, const std::vector<std::string>& per_state);

  std::size_t domain_size() const { return values.size(); }
  const std::string& at(std::size_t state) const { return codomain.at(values.at(state)); }
  bool numeric() const;
  /// Throws ValidationError for non-numeric codomain entries.
  double numeric_value(std::size_t codomain_index) const;
};

/// Numeric reading of a value label; nullopt when it is not a number.
std::optional<double> parse_numeric_value(const std::string& label);

/// Pointwise product of two real-valued information functions.
InformationFunction product(const InformationFunction& a, const InformationFunction& b);

using Outcome = std::vector<std::string>;

struct ObservabilityReport {
  std::vector<Outcome> outcomes;
  RealVector probabilities;
  bool nonnegative = true;
  std::vector<std::pair<Outcome, double>> offending;  // outcomes with weight < -tol

  double total() const { return probabilities.sum(); }
  /// Throws std::out_of_range for outcomes not in the table.
  double probability(const Outcome& outcome) const;
};

/// p_Q(a) = Σ_{ω : X(ω) = a} q_ω over the codomain of X.
ObservabilityReport induced_distribution(const Density& q, const HiddenStateBasis& basis,
                                         const InformationFunction& x, double tol = 1e-9);

/// Induced distribution of the composite (X_1, ..., X_k) over the product of
/// codomains, enumerated lexicographically. Jointly observable iff the report
/// is nonnegative.
ObservabilityReport joint_observability(const Density& q, const HiddenStateBasis& basis,
                                        const std::vector<InformationFunction>& xs,
                                        double tol = 1e-9);

/// E_Q(X) = Σ_x x p_Q(x); signed when Q is generalized.
double expectation(const Density& q, const HiddenStateBasis& basis, const InformationFunction& x);

struct BellReport {
  double e_xy = 0.0;
  double e_yz = 0.0;
  double e_xz = 0.0;
  double lhs = 0.0;  // |E(XY) - E(YZ)|
  double rhs = 0.0;  // 1 - E(XZ)
  bool satisfied = true;
  bool jointly_observable = true;
  ObservabilityReport joint;
};

/// |E(XY) - E(YZ)| <= 1 - E(XZ) for ±1-valued X, Y, Z, plus whether the
/// triple is jointly observable.
BellReport bell_check(const Density& q, const HiddenStateBasis& basis, const InformationFunction& x,
                      const InformationFunction& y, const InformationFunction& z,
                      double tol = 1e-9);

struct ViterbiResult {
  std::vector<std::size_t> path;  // ω_0 .. ω_t, t = |v|
  double weight = 0.0;
  bool negative_weights = false;  // some weight or transfer factor was negative
};

/// Maximizes tr(T_{ω_t} μ_{v_t} ... T_{ω_1} μ_{v_1} T_{ω_0} Q0) with
/// T_ω(Q) = P_ω Q P_ω*. Rank-one bases use dynamic programming over signed
/// scalar transfer factors (tracking both extremes); higher-rank bases fall
/// back to exhaustive enumeration. Ties go to the lexicographically smallest
/// path. Throws UnsupportedChainError if some T_ω leaves the chain's subspace.
ViterbiResult viterbi_hidden_path(const QuantumChain& c, const HiddenStateBasis& basis,
                                  const Word& v, const Tolerances& tol = {});

}  // namespace qpm
