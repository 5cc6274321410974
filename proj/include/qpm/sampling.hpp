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
#include <random>
#include <vector>

#include "qpm/models.hpp"
#include "qpm/quantum_chain.hpp"

namespace qpm {

/// Portable per-trajectory random stream.
///
/// Stream `i` of seed `s` is std::mt19937_64 seeded with
/// splitmix64(s ^ splitmix64(i + 1)); uniforms are (next() >> 11) * 2^-53.
/// Both pieces are fully specified by the C++ standard and the splitmix64
/// reference, so trajectories are identical across platforms.
class TrajectoryRng {
 public:
  TrajectoryRng(std::uint64_t seed, std::uint64_t stream);

  /// Uniform in [0, 1).
  double uniform();
  /// Index drawn from nonnegative weights (need not be normalized).
  std::size_t categorical(const RealVector& weights);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

Word sample_trajectory(const HmmParam& h, std::size_t length, std::uint64_t seed,
                       std::uint64_t stream = 0);
Word sample_trajectory(const QrwParam& q, std::size_t length, std::uint64_t seed,
                       std::uint64_t stream = 0);
/// Samples letters from the conditional probabilities tr μ_a(Q_t) / tr Q_t.
/// Values in [-clamp, 0) are clamped to zero; anything lower raises
/// SamplingError, which is the normal outcome for QPMs that are not QMCs.
Word sample_trajectory(const QuantumChain& c, std::size_t length, std::uint64_t seed,
                       std::uint64_t stream = 0, double clamp = Tolerances{}.clamp);

/// `count` trajectories, trajectory i drawn from stream i. Output order is by
/// trajectory index.
template <typename Model>
std::vector<Word> sample_trajectories(const Model& model, std::size_t length, std::size_t count,
                                      std::uint64_t seed) {
  std::vector<Word> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample_trajectory(model, length, seed, i));
  return out;
}

}  // namespace qpm
