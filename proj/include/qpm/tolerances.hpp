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

namespace qpm {

/// Single source of numeric thresholds. Every field can be overridden from
/// the CLI (`--tol-*`) or a JSON config named by QPMKIT_CONFIG.
struct Tolerances {
  double hermitian = 1e-9;  // |Q_ij - conj(Q_ji)|
  double psd = 1e-9;        // min eigenvalue >= -psd
  double trace = 1e-9;      // |tr Q - 1|
  double recon = 1e-8;      // spectral reconstruction / orthonormality
  double eval = 1e-9;       // process-function axioms, row sums
  double rank = 1e-8;       // relative singular-value cut
  double unitary = 1e-9;    // ||UU* - I||
  double equiv = 1e-9;      // processes_equivalent
  double residual = 1e-8;   // least-squares residual for QPM coefficients
  double closure = 1e-9;    // subspace membership of superoperator images
  double clamp = 1e-9;      // negative probabilities clamped to zero while sampling
  double degenerate = 1e-8; // eigenvalue cluster gap
};

}  // namespace qpm
