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
#include <map>

#include "oracles.hpp"
#include "qpm/io.hpp"
#include "qpm/sampling.hpp"

using namespace qpm;

namespace {

HmmParam hmm2() { return std::get<HmmParam>(io::load_model(oracle::fixture("hmm2.json"))); }

}  // namespace

TEST(Sampling, EmptyAndDeterministic) {
  EXPECT_TRUE(sample_trajectory(hmm2(), 0, 1).empty());
  HmmParam always_a{{"s"}, Alphabet({"a", "b"}), RealMatrix(1, 2), RealVector::Ones(1), RealMatrix::Ones(1, 1)};
  always_a.emission << 1.0, 0.0;
  EXPECT_EQ(sample_trajectory(always_a, 5, 99), (Word{0, 0, 0, 0, 0}));
}

TEST(Sampling, ReproducibleStreams) {
  const auto h = hmm2();
  EXPECT_EQ(sample_trajectory(h, 20, 7, 3), sample_trajectory(h, 20, 7, 3));
  EXPECT_NE(sample_trajectory(h, 20, 7, 3), sample_trajectory(h, 20, 7, 4));
  const auto batch = sample_trajectories(h, 10, 5, 42);
  for (std::size_t i = 0; i < batch.size(); ++i) EXPECT_EQ(batch[i], sample_trajectory(h, 10, 42, i));
  TrajectoryRng a(1, 0), b(1, 0);
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
}

TEST(Sampling, HmmFrequenciesMatchForwardOracle) {
  const auto h = hmm2();
  const std::size_t n = 100000;
  std::map<Word, std::size_t> counts;
  for (const auto& w : sample_trajectories(h, 3, n, 2024)) ++counts[w];
  for (const auto& v : words_of_length(2, 3)) {
    const double p = oracle::forward(h, v);
    const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(n));
    EXPECT_NEAR(static_cast<double>(counts[v]) / static_cast<double>(n), p, 3 * sigma) << h.alphabet.format(v);
  }
}

TEST(Sampling, QrwFrequenciesMatchChainRule) {
  const auto q = std::get<QrwParam>(io::load_model(oracle::fixture("hadamard_qrw.json")));
  const std::size_t n = 40000;
  std::map<Word, std::size_t> counts;
  for (const auto& w : sample_trajectories(q, 3, n, 5)) ++counts[w];
  for (const auto& v : words_of_length(2, 3)) {
    const double p = oracle::qrw_chain_rule(q, v);
    const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(n));
    EXPECT_NEAR(static_cast<double>(counts[v]) / static_cast<double>(n), p, 3 * sigma + 1e-12);
  }
}

TEST(Sampling, QuantumChainFrequencies) {
  const auto h = hmm2();
  const auto c = hmm_to_qmc(h);
  const std::size_t n = 40000;
  std::map<Word, std::size_t> counts;
  for (const auto& w : sample_trajectories(c, 2, n, 8)) ++counts[w];
  for (const auto& v : words_of_length(2, 2)) {
    const double p = oracle::forward(h, v);
    const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(n));
    EXPECT_NEAR(static_cast<double>(counts[v]) / static_cast<double>(n), p, 3 * sigma);
  }
}

TEST(Sampling, NegativeBranchesRaise) {
  // Single-letter QPM whose second letter gets negative conditional weight.
  auto space = OperatorSubspace::diagonal(2);
  SuperOperator a{RealMatrix(2, 2)}, b{RealMatrix(2, 2)};
  a.coords << 1.2, 0.0, 0.0, 0.0;
  b.coords << -0.2, 0.0, 0.0, 1.0;
  RealVector q0(2);
  q0 << 1.0, 0.0;
  const auto c = QuantumChain::make(Alphabet({"a", "b"}), space, {a, b},
                                    Density::make(q0.cast<Complex>().asDiagonal(), DensityKind::Generalized),
                                    ChainKind::QPM);
  EXPECT_THROW(sample_trajectory(c, 1, 0), SamplingError);
}
