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

#include "qpm/hidden_states.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <stdexcept>

namespace qpm {

HiddenStateBasis HiddenStateBasis::standard(Index n, std::vector<std::string> labels) {
  HiddenStateBasis b;
  if (labels.empty())
    for (Index i = 0; i < n; ++i) labels.push_back("w" + std::to_string(i + 1));
  if (static_cast<Index>(labels.size()) != n)
    throw ValidationError("hidden-state labels must match the dimension");
  b.labels = std::move(labels);
  for (Index i = 0; i < n; ++i) {
    ComplexMatrix p = ComplexMatrix::Zero(n, n);
    p(i, i) = 1.0;
    b.projectors.push_back(std::move(p));
  }
  return b;
}

HiddenStateBasis HiddenStateBasis::from_density(const Density& q, const Tolerances& tol) {
  const auto sd = spectral_decompose(q.hermitian(), tol);
  HiddenStateBasis b;
  const Index n = q.dim();
  Index start = 0;
  while (start < n) {
    Index end = start + 1;
    while (end < n && sd.eigenvalues(end - 1) - sd.eigenvalues(end) < tol.degenerate) ++end;
    b.projectors.push_back(projector(sd.eigenvectors.middleCols(start, end - start)));
    b.labels.push_back("w" + std::to_string(b.labels.size() + 1));
    start = end;
  }
  return b;
}

std::size_t HiddenStateBasis::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return i;
  throw ValidationError("unknown hidden state '" + label + "'");
}

ValidationReport HiddenStateBasis::validate(double tol) const {
  ValidationReport r;
  if (projectors.empty()) {
    r.add("shape", "hidden-state basis is empty");
    return r;
  }
  if (labels.size() != projectors.size()) r.add("shape", "one label per projector is required");
  const Index n = dim();
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < projectors.size(); ++i) {
    const auto& p = projectors[i];
    if (p.rows() != n || p.cols() != n) {
      r.add("shape", "projector " + std::to_string(i) + " has the wrong shape");
      return r;
    }
    if ((p * p - p).norm() > tol) r.add("idempotent", "P_" + std::to_string(i) + " is not idempotent");
    for (std::size_t j = i + 1; j < projectors.size(); ++j)
      if ((p * projectors[j]).norm() > tol)
        r.add("orthogonal", "P_" + std::to_string(i) + " P_" + std::to_string(j) + " != 0");
    sum += p * p.adjoint();
  }
  if ((sum - ComplexMatrix::Identity(n, n)).norm() > tol)
    r.add("resolution", "projectors do not resolve the identity");
  return r;
}

RealVector hidden_state_weights(const Density& q, const HiddenStateBasis& basis) {
  if (basis.dim() != q.dim()) throw DimensionError("hidden_state_weights: dimension mismatch");
  RealVector w(static_cast<Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& p = basis.projectors[i];
    w(static_cast<Index>(i)) = (p * q.matrix() * p.adjoint()).trace().real();
  }
  return w;
}

std::optional<double> parse_numeric_value(const std::string& label) {
  if (label == "+") return 1.0;
  if (label == "-") return -1.0;
  if (label.empty()) return std::nullopt;
  const char* begin = label.data();
  if (*begin == '+') ++begin;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, label.data() + label.size(), value);
  if (ec != std::errc() || ptr != label.data() + label.size()) return std::nullopt;
  return value;
}

InformationFunction InformationFunction::from_values(std::string name,
                                                     const std::vector<std::string>& per_state) {
  InformationFunction f;
  f.name = std::move(name);
  for (const auto& v : per_state)
    if (std::find(f.codomain.begin(), f.codomain.end(), v) == f.codomain.end())
      f.codomain.push_back(v);
  const bool all_numeric = std::all_of(f.codomain.begin(), f.codomain.end(),
                                       [](const auto& v) { return parse_numeric_value(v).has_value(); });
  if (all_numeric)
    std::stable_sort(f.codomain.begin(), f.codomain.end(), [](const auto& a, const auto& b) {
      return *parse_numeric_value(a) < *parse_numeric_value(b);
    });
  for (const auto& v : per_state)
    f.values.push_back(static_cast<std::size_t>(
        std::find(f.codomain.begin(), f.codomain.end(), v) - f.codomain.begin()));
  return f;
}

bool InformationFunction::numeric() const {
  return std::all_of(codomain.begin(), codomain.end(),
                     [](const auto& v) { return parse_numeric_value(v).has_value(); });
}

double InformationFunction::numeric_value(std::size_t i) const {
  const auto v = parse_numeric_value(codomain.at(i));
  if (!v) throw ValidationError("information function '" + name + "' has non-numeric value '" +
                                codomain.at(i) + "'");
  return *v;
}

InformationFunction product(const InformationFunction& a, const InformationFunction& b) {
  if (a.domain_size() != b.domain_size())
    throw DimensionError("product: information functions have different domains");
  std::vector<std::string> values;
  for (std::size_t s = 0; s < a.domain_size(); ++s) {
    const double v = a.numeric_value(a.values[s]) * b.numeric_value(b.values[s]);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    values.emplace_back(buf);
  }
  return InformationFunction::from_values(a.name + b.name, values);
}

double ObservabilityReport::probability(const Outcome& outcome) const {
  for (std::size_t i = 0; i < outcomes.size(); ++i)
    if (outcomes[i] == outcome) return probabilities(static_cast<Index>(i));
  throw std::out_of_range("outcome not in the distribution");
}

ObservabilityReport joint_observability(const Density& q, const HiddenStateBasis& basis,
                                        const std::vector<InformationFunction>& xs, double tol) {
  if (xs.empty()) throw ValidationError("joint_observability: no information functions");
  for (const auto& x : xs)
    if (x.domain_size() != basis.size())
      throw ValidationError("information function '" + x.name + "' is not total on the hidden states");
  const RealVector weights = hidden_state_weights(q, basis);

  // Mixed-radix enumeration of Σ_1 x ... x Σ_k, last component fastest.
  std::size_t count = 1;
  for (const auto& x : xs) count *= x.codomain.size();
  ObservabilityReport rep;
  rep.probabilities = RealVector::Zero(static_cast<Index>(count));
  std::vector<std::size_t> digits(xs.size(), 0);
  for (std::size_t n = 0; n < count; ++n) {
    Outcome o;
    for (std::size_t i = 0; i < xs.size(); ++i) o.push_back(xs[i].codomain[digits[i]]);
    rep.outcomes.push_back(std::move(o));
    for (std::size_t i = xs.size(); i-- > 0;) {
      if (++digits[i] < xs[i].codomain.size()) break;
      digits[i] = 0;
    }
  }
  for (std::size_t s = 0; s < basis.size(); ++s) {
    std::size_t index = 0;
    for (const auto& x : xs) index = index * x.codomain.size() + x.values[s];
    rep.probabilities(static_cast<Index>(index)) += weights(static_cast<Index>(s));
  }
  for (std::size_t i = 0; i < count; ++i) {
    const double p = rep.probabilities(static_cast<Index>(i));
    if (p < -tol) {
      rep.nonnegative = false;
      rep.offending.emplace_back(rep.outcomes[i], p);
    }
  }
  return rep;
}

ObservabilityReport induced_distribution(const Density& q, const HiddenStateBasis& basis,
                                         const InformationFunction& x, double tol) {
  return joint_observability(q, basis, {x}, tol);
}

double expectation(const Density& q, const HiddenStateBasis& basis, const InformationFunction& x) {
  const auto rep = induced_distribution(q, basis, x);
  double e = 0.0;
  for (std::size_t i = 0; i < x.codomain.size(); ++i)
    e += x.numeric_value(i) * rep.probabilities(static_cast<Index>(i));
  return e;
}

BellReport bell_check(const Density& q, const HiddenStateBasis& basis, const InformationFunction& x,
                      const InformationFunction& y, const InformationFunction& z, double tol) {
  for (const auto* f : {&x, &y, &z})
    for (std::size_t i = 0; i < f->codomain.size(); ++i) {
      const double v = f->numeric_value(i);
      if (v != 1.0 && v != -1.0)
        throw ValidationError("bell_check: '" + f->name + "' takes a value other than +-1");
    }
  BellReport r;
  r.e_xy = expectation(q, basis, product(x, y));
  r.e_yz = expectation(q, basis, product(y, z));
  r.e_xz = expectation(q, basis, product(x, z));
  r.lhs = std::abs(r.e_xy - r.e_yz);
  r.rhs = 1.0 - r.e_xz;
  r.satisfied = r.lhs <= r.rhs + tol;
  r.joint = joint_observability(q, basis, {x, y, z}, tol);
  r.jointly_observable = r.joint.nonnegative;
  return r;
}

namespace {

struct Candidate {
  double value = 0.0;
  std::vector<std::size_t> path;
  bool valid = false;
};

// Path weights are products of many factors, so ties are judged relatively.
bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

// Strictly better for maximization (or minimization when sign = -1), with
// lexicographically smaller paths winning ties.
bool better(const Candidate& a, const Candidate& b, double sign) {
  if (!b.valid) return a.valid;
  if (!a.valid) return false;
  if (!close(a.value, b.value)) return sign * a.value > sign * b.value;
  return a.path < b.path;
}

}  // namespace

ViterbiResult viterbi_hidden_path(const QuantumChain& c, const HiddenStateBasis& basis,
                                  const Word& v, const Tolerances& tol) {
  check_word(c.alphabet(), v);
  const auto& space = c.subspace();
  if (basis.dim() != space.ambient_dim())
    throw DimensionError("viterbi_hidden_path: basis dimension does not match the chain");
  const std::size_t n = basis.size();

  // T_ω in subspace coordinates; closure is required.
  std::vector<SuperOperator> project;
  for (std::size_t w = 0; w < n; ++w) {
    const auto& p = basis.projectors[w];
    try {
      project.push_back(superoperator_from_map(
          space, [&](const ComplexMatrix& q) -> ComplexMatrix { return p * q * p.adjoint(); },
          tol.closure));
    } catch (const ValidationError&) {
      throw UnsupportedChainError("viterbi_hidden_path: T_" + basis.labels[w] +
                                  " does not map the chain's subspace into itself");
    }
  }

  ViterbiResult out;
  const bool rank_one = std::all_of(basis.projectors.begin(), basis.projectors.end(),
                                    [](const ComplexMatrix& p) { return std::abs(p.trace().real() - 1.0) < 1e-9; });
  const RealVector& traces = space.traces();

  if (rank_one) {
    // T_ω(X) = tr(P_ω X) P_ω, so weights factor through scalars.
    const RealVector start = hidden_state_weights(c.initial(), basis);
    std::vector<RealVector> unit(n);  // coordinates of P_ω, empty when outside the subspace
    for (std::size_t w = 0; w < n; ++w) {
      double residual = 0.0;
      RealVector coords = space.expand(basis.projectors[w], &residual);
      if (residual <= tol.closure) unit[w] = std::move(coords);
    }
    auto factor = [&](Symbol a, std::size_t from, std::size_t to) {
      if (unit[from].size() == 0) return 0.0;
      return traces.dot(project[to].apply(c.op(a).apply(unit[from])));
    };

    std::vector<Candidate> hi(n), lo(n);
    for (std::size_t w = 0; w < n; ++w) {
      const double q = start(static_cast<Index>(w));
      if (q < -tol.psd) out.negative_weights = true;
      hi[w] = lo[w] = Candidate{q, {w}, true};
    }
    for (Symbol a : v) {
      RealMatrix f(static_cast<Index>(n), static_cast<Index>(n));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          f(static_cast<Index>(i), static_cast<Index>(j)) = factor(a, i, j);
          if (f(static_cast<Index>(i), static_cast<Index>(j)) < -tol.psd) out.negative_weights = true;
        }
      std::vector<Candidate> next_hi(n), next_lo(n);
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
          const double fij = f(static_cast<Index>(i), static_cast<Index>(j));
          for (const Candidate* prev : {&hi[i], &lo[i]}) {
            Candidate cand{prev->value * fij, prev->path, true};
            cand.path.push_back(j);
            if (better(cand, next_hi[j], 1.0)) next_hi[j] = cand;
            if (better(cand, next_lo[j], -1.0)) next_lo[j] = std::move(cand);
          }
        }
      }
      hi = std::move(next_hi);
      lo = std::move(next_lo);
    }
    Candidate best;
    for (const auto& cand : hi)
      if (better(cand, best, 1.0)) best = cand;
    out.path = best.path;
    out.weight = best.value;
  } else {
    std::size_t total = n;
    for (std::size_t i = 0; i < v.size(); ++i) {
      total *= n;
      if (total > 200000)
        throw UnsupportedChainError("viterbi_hidden_path: higher-rank projectors need exhaustive "
                                    "search, too many paths");
    }
    Candidate best;
    std::vector<std::size_t> path(v.size() + 1, 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rest = idx;
      for (std::size_t k = path.size(); k-- > 0;) {
        path[k] = rest % n;
        rest /= n;
      }
      RealVector x = project[path[0]].apply(c.initial_coords());
      for (std::size_t k = 0; k < v.size(); ++k) x = project[path[k + 1]].apply(c.op(v[k]).apply(x));
      Candidate cand{traces.dot(x), path, true};
      if (cand.value < -tol.psd) out.negative_weights = true;
      if (better(cand, best, 1.0)) best = std::move(cand);
    }
    out.path = best.path;
    out.weight = best.value;
  }
  if (out.weight < -tol.psd) out.negative_weights = true;
  return out;
}

}  // namespace qpm
