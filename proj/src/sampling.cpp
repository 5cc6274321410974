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

#include "qpm/sampling.hpp"

#include <cmath>
#include <string>

namespace qpm {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

TrajectoryRng::TrajectoryRng(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(seed ^ splitmix64(stream + 1))) {}

double TrajectoryRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t TrajectoryRng::categorical(const RealVector& weights) {
  const double total = weights.sum();
  if (!(total > 0.0)) throw SamplingError("categorical draw from zero total weight");
  const double u = uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (Index i = 0; i < weights.size(); ++i) {
    if (weights(i) <= 0.0) continue;
    acc += weights(i);
    last_positive = static_cast<std::size_t>(i);
    if (u < acc) return last_positive;
  }
  return last_positive;
}

Word sample_trajectory(const HmmParam& h, std::size_t length, std::uint64_t seed,
                       std::uint64_t stream) {
  auto report = validate_hmm(h);
  if (!report.ok()) throw ValidationError(std::move(report));
  TrajectoryRng rng(seed, stream);
  Word w;
  if (length == 0) return w;
  std::size_t state = rng.categorical(h.initial);
  for (std::size_t t = 0; t < length; ++t) {
    w.push_back(rng.categorical(h.emission.row(static_cast<Index>(state)).transpose()));
    if (t + 1 < length) state = rng.categorical(h.transition.row(static_cast<Index>(state)).transpose());
  }
  return w;
}

Word sample_trajectory(const QrwParam& q, std::size_t length, std::uint64_t seed,
                       std::uint64_t stream) {
  auto report = validate_qrw(q);
  if (!report.ok()) throw ValidationError(std::move(report));
  TrajectoryRng rng(seed, stream);
  Word w;
  ComplexVector psi = q.initial / q.initial.norm();
  for (std::size_t t = 0; t < length; ++t) {
    const QrwStep step = qrw_step(q, psi);
    const Symbol a = rng.categorical(step.probabilities);
    w.push_back(a);
    psi = step.collapse(a);
  }
  return w;
}

Word sample_trajectory(const QuantumChain& c, std::size_t length, std::uint64_t seed,
                       std::uint64_t stream, double clamp) {
  TrajectoryRng rng(seed, stream);
  const auto& traces = c.subspace().traces();
  const std::size_t k = c.alphabet().size();
  RealVector x = c.initial_coords();
  Word w;
  std::vector<RealVector> images(k);
  RealVector probs(static_cast<Index>(k));
  for (std::size_t t = 0; t < length; ++t) {
    const double norm = traces.dot(x);
    if (!(norm > 0.0)) throw SamplingError("trajectory reached a prefix of zero probability");
    for (Symbol a = 0; a < k; ++a) {
      images[a] = c.op(a).apply(x);
      double q = traces.dot(images[a]) / norm;
      if (q < 0.0) {
        if (q < -clamp)
          throw SamplingError("negative conditional probability " + std::to_string(q) +
                              " for symbol '" + c.alphabet().name(a) + "'");
        q = 0.0;
      }
      probs(static_cast<Index>(a)) = q;
    }
    const Symbol a = rng.categorical(probs);
    w.push_back(a);
    const double next_norm = traces.dot(images[a]);
    x = images[a] / next_norm;
  }
  return w;
}

}  // namespace qpm
