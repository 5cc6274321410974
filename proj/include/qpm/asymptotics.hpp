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

#include <cstdint>
#include <stop_token>
#include <vector>

#include "qpm/quantum_chain.hpp"

namespace qpm {

struct BoundednessReport {
  std::vector<double> purities;  // tr(μ^t(Q0)^2) for t = 0..T
  double max_purity = 0.0;
  bool monotone = false;         // purities never decrease
  bool growth_detected = false;  // repeated doubling of purity across the horizon
};

/// Tracks tr(μ^t(Q0)^2) for t <= steps. Growth is flagged when the purity at
/// T exceeds `growth_factor` times the purity at T/2, which in turn exceeds
/// `growth_factor` times the purity at T/4.
BoundednessReport boundedness_probe(const QuantumChain& c, std::size_t steps,
                                    double growth_factor = 1.5);

enum class CesaroMethod { Iterative, Spectral };

const char* to_string(CesaroMethod m);

struct CesaroOptions {
  CesaroMethod method = CesaroMethod::Spectral;
  double tol = 1e-8;
  /// Largest averaging horizon for the iterative method. Checkpoints double,
  /// so this costs about log2(t_max) operator squarings.
  std::uint64_t t_max = std::uint64_t{1} << 40;
  double cluster_tol = 1e-8;   // eigenvalues within this distance of 1
  bool cross_check = true;     // run the other method and compare (10 * tol)
  bool assume_bounded = false; // skip the boundedness probe
  std::size_t probe_steps = 200;
  std::stop_token stop{};
};

struct CesaroResult {
  Density limit;
  RealVector coords;  // limit in subspace coordinates
  CesaroMethod method = CesaroMethod::Spectral;
  std::uint64_t iterations = 0;   // averaging horizon reached (iterative)
  std::size_t krylov_dim = 0;     // dimension of span{μ^t Q0}
  std::size_t unit_multiplicity = 0;
  double spectral_gap = 0.0;      // min |1 - λ| over the non-unit eigenvalues
  double stationarity_residual = 0.0;  // ||μ(Q~) - Q~||
  double method_discrepancy = 0.0;     // ||Q~_iterative - Q~_spectral|| when cross-checked
};

/// Limit of the averages (1/t) Σ_{k=1}^t μ^k(Q0).
///
/// Iterative: averages at t = 1, 2, 4, ... via s_{2t} = (s_t + μ^t s_t)/2 with
/// μ^t obtained by repeated squaring (extended precision), stopping when
/// ||s_t - s_{t/2}|| <= tol. Spectral: restricts μ to V = span{μ^t Q0},
/// checks that the eigenvalue-1 cluster is semisimple and projects Q0 onto
/// ker(μ - 1) along range(μ - 1).
///
/// Throws DivergenceError on detected growth, ConsistencyError when the
/// methods disagree, a Jordan block sits at 1, or a QMC limit is not PSD.
CesaroResult cesaro_limit(const QuantumChain& c, const CesaroOptions& opts = {});

/// tr(X Q~) for a Hermitian observable X.
double limit_functional(const CesaroResult& r, const ComplexMatrix& x);

/// tr μ_v(Q~).
double stationary_word_probability(const QuantumChain& c, const CesaroResult& r, const Word& v);

/// Stationary single-letter distribution, indexed by symbol.
RealVector stationary_letter_distribution(const QuantumChain& c, const CesaroResult& r);

}  // namespace qpm
