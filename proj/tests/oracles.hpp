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

// Reference implementations used only by tests. They work from model
// parameters directly and share no code paths with the library beyond the
// parameter structs.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qpm/models.hpp"
#include "qpm/quantum_chain.hpp"

namespace oracle {

using qpm::ComplexMatrix;
using qpm::ComplexVector;
using qpm::Index;
using qpm::RealMatrix;
using qpm::RealVector;
using qpm::Word;

inline std::string fixture(const std::string& name) { return std::string(QPM_FIXTURE_DIR) + "/" + name; }

/// Forward algorithm with the emit-then-move convention:
/// α_1(i) = π_i, α_{k+1}(j) = Σ_i α_k(i) e_{i v_k} m_ij, p(v) = Σ_j α_{t+1}(j).
inline double forward(const qpm::HmmParam& h, const Word& v) {
  const auto n = static_cast<std::size_t>(h.initial.size());
  std::vector<double> alpha(n);
  for (std::size_t i = 0; i < n; ++i) alpha[i] = h.initial(static_cast<Index>(i));
  for (auto a : v) {
    std::vector<double> next(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        next[j] += alpha[i] * h.emission(static_cast<Index>(i), static_cast<Index>(a)) *
                   h.transition(static_cast<Index>(i), static_cast<Index>(j));
    alpha = next;
  }
  double p = 0.0;
  for (double x : alpha) p += x;
  return p;
}

/// Chain rule over explicit wave collapse: apply U, take the node's
/// probability, project and renormalize.
inline double qrw_chain_rule(const qpm::QrwParam& q, const Word& v) {
  ComplexVector psi = q.initial;
  const auto k = static_cast<Index>(q.coins.size());
  double p = 1.0;
  for (auto a : v) {
    const ComplexVector phi = q.unitary * psi;
    const Index start = static_cast<Index>(a) * k;
    const double pa = phi.segment(start, k).squaredNorm();
    p *= pa;
    if (pa == 0.0) return 0.0;
    psi = ComplexVector::Zero(phi.size());
    psi.segment(start, k) = phi.segment(start, k) / std::sqrt(pa);
  }
  return p;
}

struct PathWeight {
  std::vector<std::size_t> path;
  double weight = -1.0;
};

/// Exhaustive maximization of π_{s0} Π_k e_{s_{k-1} v_k} m_{s_{k-1} s_k};
/// enumeration is lexicographic and only improvements beyond a relative
/// 1e-12 replace the incumbent, so ties (up to rounding) keep the smallest path.
inline PathWeight exhaustive_viterbi(const qpm::HmmParam& h, const Word& v) {
  const auto n = static_cast<std::size_t>(h.initial.size());
  const std::size_t len = v.size() + 1;
  std::size_t total = 1;
  for (std::size_t i = 0; i < len; ++i) total *= n;
  PathWeight best;
  std::vector<std::size_t> path(len);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (std::size_t k = len; k-- > 0;) {
      path[k] = rest % n;
      rest /= n;
    }
    double w = h.initial(static_cast<Index>(path[0]));
    for (std::size_t k = 0; k < v.size(); ++k)
      w *= h.emission(static_cast<Index>(path[k]), static_cast<Index>(v[k])) *
           h.transition(static_cast<Index>(path[k]), static_cast<Index>(path[k + 1]));
    if (w > best.weight + 1e-12 * std::abs(best.weight)) best = {path, w};
  }
  return best;
}

/// Rank by Gaussian elimination with full pivoting; pivots below
/// eps * (largest |entry|) count as zero.
inline std::size_t gaussian_rank(RealMatrix m, double eps) {
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0;
  std::size_t rank = 0;
  Index rows = m.rows(), cols = m.cols();
  for (Index k = 0; k < std::min(rows, cols); ++k) {
    Index pr = k, pc = k;
    double best = 0.0;
    for (Index i = k; i < rows; ++i)
      for (Index j = k; j < cols; ++j)
        if (std::abs(m(i, j)) > best) best = std::abs(m(i, j)), pr = i, pc = j;
    if (best <= eps * scale) break;
    m.row(k).swap(m.row(pr));
    m.col(k).swap(m.col(pc));
    for (Index i = k + 1; i < rows; ++i) m.row(i) -= (m(i, k) / m(k, k)) * m.row(k);
    ++rank;
  }
  return rank;
}

inline RealVector random_simplex(std::mt19937_64& rng, Index n) {
  std::exponential_distribution<double> e(1.0);
  RealVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = e(rng);
  return v / v.sum();
}

inline qpm::HmmParam random_hmm(std::mt19937_64& rng, Index states, Index symbols) {
  qpm::HmmParam h;
  for (Index i = 0; i < states; ++i) h.states.push_back("s" + std::to_string(i));
  std::vector<std::string> names;
  for (Index a = 0; a < symbols; ++a) names.push_back(std::string(1, static_cast<char>('a' + a)));
  h.alphabet = qpm::Alphabet(names);
  h.emission.resize(states, symbols);
  h.transition.resize(states, states);
  for (Index i = 0; i < states; ++i) {
    h.emission.row(i) = random_simplex(rng, symbols).transpose();
    h.transition.row(i) = random_simplex(rng, states).transpose();
  }
  h.initial = random_simplex(rng, states);
  return h;
}

/// Haar unitary: QR of a complex Ginibre matrix with the phases of R's
/// diagonal folded back into Q.
inline ComplexMatrix haar_unitary(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix z(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) z(i, j) = {g(rng), g(rng)};
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
  return q;
}

inline ComplexVector random_unit_vector(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = {g(rng), g(rng)};
  return v / v.norm();
}

/// Random quantum density of rank up to n: normalized G G*.
inline ComplexMatrix random_density(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix z(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) z(i, j) = {g(rng), g(rng)};
  ComplexMatrix q = z * z.adjoint();
  q /= q.trace().real();
  return (q + q.adjoint()) / 2.0;
}

/// Local unitary on a ring of `nodes` nodes with `coins` coins per node:
/// a Haar coin on each node's block followed by a shift that sends coin x of
/// node a to node a + x (mod nodes). Amplitude from node a lands only on a's
/// neighbours, which are the edges listed.
inline qpm::QrwParam random_local_qrw(std::mt19937_64& rng, std::size_t nodes, std::size_t coins) {
  qpm::QrwParam q;
  std::vector<std::string> names;
  for (std::size_t a = 0; a < nodes; ++a) names.push_back("n" + std::to_string(a));
  q.alphabet = qpm::Alphabet(names);
  for (std::size_t x = 0; x < coins; ++x) q.coins.push_back("c" + std::to_string(x));
  for (std::size_t a = 0; a < nodes; ++a)
    for (std::size_t x = 1; x < coins; ++x) {
      const std::size_t b = (a + x) % nodes;
      if (b == a) continue;
      std::pair<qpm::Symbol, qpm::Symbol> e{a, b};
      if (std::find(q.edges.begin(), q.edges.end(), e) == q.edges.end()) q.edges.push_back(e);
    }
  const auto k = static_cast<Index>(nodes * coins);
  ComplexMatrix coin = ComplexMatrix::Zero(k, k);
  for (std::size_t a = 0; a < nodes; ++a) {
    const auto start = static_cast<Index>(a * coins);
    coin.block(start, start, static_cast<Index>(coins), static_cast<Index>(coins)) =
        haar_unitary(rng, static_cast<Index>(coins));
  }
  ComplexMatrix shift = ComplexMatrix::Zero(k, k);
  for (std::size_t a = 0; a < nodes; ++a)
    for (std::size_t x = 0; x < coins; ++x)
      shift(static_cast<Index>(((a + x) % nodes) * coins + x), static_cast<Index>(a * coins + x)) = 1.0;
  q.unitary = shift * coin;
  q.initial = random_unit_vector(rng, k);
  return q;
}

/// Random Kraus family with Σ_a M_a* M_a = I: blocks of the first n columns of
/// a Haar unitary of size (symbols * n).
inline std::vector<ComplexMatrix> random_kraus(std::mt19937_64& rng, Index n, Index symbols) {
  const ComplexMatrix u = haar_unitary(rng, n * symbols);
  std::vector<ComplexMatrix> ops;
  for (Index a = 0; a < symbols; ++a) ops.push_back(u.block(a * n, 0, n, n));
  return ops;
}

}  // namespace oracle
