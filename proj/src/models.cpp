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

#include "qpm/models.hpp"

#include <deque>
#include <cmath>
#include <set>
#include <string>

namespace qpm {
namespace {

// Probabilities at or below this are treated as zero when collapsing.
constexpr double kZeroProbability = 1e-14;

std::string idx(Index i) { return std::to_string(i); }

void check_distribution_rows(ValidationReport& r, const RealMatrix& m, const std::string& what,
                             double tol) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j)
      if (!std::isfinite(m(i, j)) || m(i, j) < -tol)
        r.add("nonnegativity", what + "(" + idx(i) + "," + idx(j) + ") = " +
                                   format_number(m(i, j)));
    const double s = m.row(i).sum();
    if (std::abs(s - 1.0) > tol)
      r.add("row_sum", what + " row " + idx(i) + " sums to " + format_number(s));
  }
}

void check_initial(ValidationReport& r, const RealVector& pi, double tol) {
  for (Index i = 0; i < pi.size(); ++i)
    if (!std::isfinite(pi(i)) || pi(i) < -tol)
      r.add("nonnegativity", "initial(" + idx(i) + ") = " + format_number(pi(i)));
  if (std::abs(pi.sum() - 1.0) > tol)
    r.add("initial_sum", "initial distribution sums to " + format_number(pi.sum()));
}

}  // namespace

ValidationReport validate_hmm(const HmmParam& h, double tol) {
  ValidationReport r;
  const auto n = static_cast<Index>(h.states.size());
  const auto k = static_cast<Index>(h.alphabet.size());
  if (n == 0) r.add("shape", "HMM needs at least one state");
  if (h.emission.rows() != n || h.emission.cols() != k)
    r.add("shape", "emission must be " + idx(n) + "x" + idx(k));
  if (h.transition.rows() != n || h.transition.cols() != n)
    r.add("shape", "transition must be " + idx(n) + "x" + idx(n));
  if (h.initial.size() != n) r.add("shape", "initial must have " + idx(n) + " entries");
  if (!r.ok()) return r;
  check_distribution_rows(r, h.emission, "emission", tol);
  check_distribution_rows(r, h.transition, "transition", tol);
  check_initial(r, h.initial, tol);
  return r;
}

ValidationReport validate_ffmc(const FfmcParam& f, double tol) {
  ValidationReport r;
  const auto n = static_cast<Index>(f.states.size());
  if (n == 0) r.add("shape", "FFMC needs at least one state");
  if (static_cast<Index>(f.labels.size()) != n)
    r.add("shape", "labelling must be total on the states");
  for (std::size_t i = 0; i < f.labels.size(); ++i)
    if (f.labels[i] >= f.alphabet.size())
      r.add("alphabet", "label of state " + std::to_string(i) + " is not in the alphabet");
  if (f.transition.rows() != n || f.transition.cols() != n)
    r.add("shape", "transition must be " + idx(n) + "x" + idx(n));
  if (f.initial.size() != n) r.add("shape", "initial must have " + idx(n) + " entries");
  if (!r.ok()) return r;
  check_distribution_rows(r, f.transition, "transition", tol);
  check_initial(r, f.initial, tol);
  return r;
}

bool FinitaryParam::is_standard(double tol) const {
  const Index d = dimension();
  if (end.size() != d) return false;
  if ((end - RealVector::Ones(d)).cwiseAbs().maxCoeff() > tol) return false;
  RealMatrix total = RealMatrix::Zero(d, d);
  for (const auto& m : letters) total += m;
  if ((total * RealVector::Ones(d) - RealVector::Ones(d)).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(initial.sum() - 1.0) <= tol;
}

ValidationReport validate_finitary(const FinitaryParam& f, std::size_t horizon,
                                   bool require_standard, double tol) {
  ValidationReport r;
  const Index d = f.dimension();
  if (d == 0) r.add("shape", "dimension must be positive");
  if (f.end.size() != d) r.add("shape", "end vector must have " + idx(d) + " entries");
  if (f.letters.size() != f.alphabet.size())
    r.add("shape", "one letter matrix per alphabet symbol is required");
  for (std::size_t a = 0; a < f.letters.size(); ++a)
    if (f.letters[a].rows() != d || f.letters[a].cols() != d)
      r.add("shape", "letter matrix '" + f.alphabet.name(a) + "' must be " + idx(d) + "x" + idx(d));
  if (!r.ok()) return r;
  if (require_standard && !f.is_standard(tol))
    r.add("standard_form", "parameters are not in standard form (M1 = 1, π·1 = 1, τ = 1)");
  r.merge(check_process_axioms(finitary_process(f), horizon, tol));
  return r;
}

ValidationReport validate_qrw(const QrwParam& q, const Tolerances& tol) {
  ValidationReport r;
  const std::size_t n = q.alphabet.size();
  const std::size_t kcoin = q.coins.size();
  if (kcoin == 0) r.add("shape", "coin set must be non-empty");
  const Index k = q.edge_dim();
  if (q.unitary.rows() != k || q.unitary.cols() != k)
    r.add("shape", "unitary must be " + idx(k) + "x" + idx(k));
  if (q.initial.size() != k) r.add("shape", "initial wave must have " + idx(k) + " entries");
  std::set<std::pair<Symbol, Symbol>> edge_set;
  for (const auto& e : q.edges) {
    if (e.first >= n || e.second >= n) {
      r.add("edge", "edge references an unknown node");
      continue;
    }
    if (!edge_set.insert(e).second)
      r.add("edge", "duplicate edge (" + q.alphabet.name(e.first) + "," +
                        q.alphabet.name(e.second) + ")");
  }
  if (!r.ok()) return r;
  if (!all_finite(q.unitary) || !all_finite(q.initial)) {
    r.add("finite", "non-finite entries");
    return r;
  }
  if (std::abs(q.initial.norm() - 1.0) > tol.trace)
    r.add("norm", "initial wave has norm " + format_number(q.initial.norm()));
  if (!is_unitary(q.unitary, tol.unitary)) r.add("unitary", "evolution operator is not unitary");
  for (Symbol a = 0; a < n; ++a) {
    for (std::size_t x = 0; x < kcoin; ++x) {
      const Index col = q.coordinate(a, x);
      for (Symbol b = 0; b < n; ++b) {
        if (b == a || edge_set.count({a, b})) continue;
        for (std::size_t y = 0; y < kcoin; ++y) {
          const double amp = std::abs(q.unitary(q.coordinate(b, y), col));
          if (amp > tol.closure)
            r.add("locality", "U moves amplitude from edge (" + q.alphabet.name(a) + "," +
                                  q.coins[x] + ") to non-adjacent node " + q.alphabet.name(b));
        }
      }
    }
  }
  return r;
}

FinitaryParam hmm_to_finitary(const HmmParam& h) {
  auto report = validate_hmm(h);
  if (!report.ok()) throw ValidationError(std::move(report));
  FinitaryParam f;
  f.alphabet = h.alphabet;
  const Index n = static_cast<Index>(h.states.size());
  for (Symbol a = 0; a < h.alphabet.size(); ++a)
    f.letters.push_back(h.emission.col(static_cast<Index>(a)).asDiagonal() * h.transition);
  f.initial = h.initial;
  f.end = RealVector::Ones(n);
  return f;
}

HmmParam ffmc_to_hmm(const FfmcParam& f) {
  HmmParam h;
  h.states = f.states;
  h.alphabet = f.alphabet;
  const Index n = static_cast<Index>(f.states.size());
  h.emission = RealMatrix::Zero(n, static_cast<Index>(f.alphabet.size()));
  for (Index i = 0; i < n; ++i) {
    const Symbol label = f.labels.at(static_cast<std::size_t>(i));
    if (label >= f.alphabet.size()) throw AlphabetError("FFMC label outside the alphabet");
    h.emission(i, static_cast<Index>(label)) = 1.0;
  }
  h.initial = f.initial;
  h.transition = f.transition;
  return h;
}

double finitary_eval(const FinitaryParam& f, const Word& v) {
  check_word(f.alphabet, v);
  Eigen::RowVectorXd state = f.initial.transpose();
  for (Symbol a : v) state = state * f.letters[a];
  return state.dot(f.end);
}

ProcessEvaluator finitary_process(const FinitaryParam& f) {
  return {f.alphabet, [f](const Word& v) { return finitary_eval(f, v); }};
}

bool finitary_equivalent(const FinitaryParam& a, const FinitaryParam& b, double tol) {
  if (!(a.alphabet == b.alphabet)) return false;
  const Index da = a.dimension(), db = b.dimension();
  const Index n = da + db;
  RealVector end(n);
  end << a.end, -b.end;
  RealMatrix basis(n, 0);  // orthonormal columns spanning the kept forward vectors
  std::deque<RealVector> queue;
  RealVector start(n);
  start << a.initial, b.initial;
  queue.push_back(start);
  while (!queue.empty() && basis.cols() < n) {
    const RealVector u = std::move(queue.front());
    queue.pop_front();
    RealVector r = u;
    for (int pass = 0; pass < 2; ++pass) r -= basis * (basis.transpose() * r);
    if (r.norm() <= 1e-10 * u.norm() || u.norm() == 0.0) continue;
    if (std::abs(u.dot(end)) > tol) return false;
    basis.conservativeResize(n, basis.cols() + 1);
    basis.col(basis.cols() - 1) = r.normalized();
    for (std::size_t s = 0; s < a.alphabet.size(); ++s) {
      RealVector next(n);
      next.head(da) = a.letters[s].transpose() * u.head(da);
      next.tail(db) = b.letters[s].transpose() * u.tail(db);
      queue.push_back(std::move(next));
    }
  }
  return true;
}

std::optional<FinitaryParam> to_standard_form(const FinitaryParam& f, double tol) {
  if (f.end.size() == 0 || f.end.cwiseAbs().minCoeff() <= tol) return std::nullopt;
  FinitaryParam out;
  out.alphabet = f.alphabet;
  const RealVector inv = f.end.cwiseInverse();
  for (const auto& m : f.letters) out.letters.push_back(inv.asDiagonal() * m * f.end.asDiagonal());
  out.initial = f.initial.cwiseProduct(f.end);
  out.end = RealVector::Ones(f.end.size());
  return out;
}

const ComplexVector& QrwStep::collapse(Symbol node) const {
  if (node >= collapsed.size()) throw AlphabetError("node index out of range");
  if (collapsed[node].size() == 0)
    throw NumericError("cannot collapse onto a node with zero probability");
  return collapsed[node];
}

QrwStep qrw_step(const QrwParam& q, const ComplexVector& psi, double tol) {
  if (psi.size() != q.edge_dim()) throw DimensionError("qrw_step: wave has wrong dimension");
  if (std::abs(psi.norm() - 1.0) > tol)
    throw ValidationError("qrw_step: wave norm " + format_number(psi.norm()) + " is not 1");
  const ComplexVector next = q.unitary * psi;
  const auto kcoin = static_cast<Index>(q.coin_count());
  const std::size_t n = q.alphabet.size();
  QrwStep step;
  step.probabilities.resize(static_cast<Index>(n));
  step.collapsed.resize(n);
  for (Symbol a = 0; a < n; ++a) {
    const auto block = next.segment(q.coordinate(a, 0), kcoin);
    const double prob = block.squaredNorm();
    step.probabilities(static_cast<Index>(a)) = prob;
    if (prob > kZeroProbability) {
      ComplexVector collapsed = ComplexVector::Zero(next.size());
      collapsed.segment(q.coordinate(a, 0), kcoin) = block / std::sqrt(prob);
      step.collapsed[a] = std::move(collapsed);
    }
  }
  return step;
}

ComplexMatrix node_projector(const QrwParam& q, Symbol node) {
  const Index k = q.edge_dim();
  ComplexMatrix p = ComplexMatrix::Zero(k, k);
  for (std::size_t x = 0; x < q.coin_count(); ++x) {
    const Index c = q.coordinate(node, x);
    p(c, c) = 1.0;
  }
  return p;
}

}  // namespace qpm
