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

#include "qpm/quantum_chain.hpp"

#include <cmath>
#include <random>
#include <string>

namespace qpm {
namespace {

double real_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return hermitian_inner(a, b).real();
}

bool is_standard_diagonal(const std::vector<ComplexMatrix>& basis, Index n) {
  if (static_cast<Index>(basis.size()) != n) return false;
  for (Index i = 0; i < n; ++i) {
    ComplexMatrix expected = ComplexMatrix::Zero(n, n);
    expected(i, i) = 1.0;
    if ((basis[static_cast<std::size_t>(i)] - expected).cwiseAbs().maxCoeff() != 0.0) return false;
  }
  return true;
}

}  // namespace

OperatorSubspace OperatorSubspace::diagonal(Index n) {
  OperatorSubspace s;
  s.n_ = n;
  for (Index i = 0; i < n; ++i) {
    ComplexMatrix d = ComplexMatrix::Zero(n, n);
    d(i, i) = 1.0;
    s.basis_.push_back(std::move(d));
  }
  s.finish();
  return s;
}

OperatorSubspace OperatorSubspace::full(Index n) {
  OperatorSubspace s;
  s.n_ = n;
  const double r = 1.0 / std::sqrt(2.0);
  for (Index i = 0; i < n; ++i) {
    ComplexMatrix d = ComplexMatrix::Zero(n, n);
    d(i, i) = 1.0;
    s.basis_.push_back(std::move(d));
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      ComplexMatrix sym = ComplexMatrix::Zero(n, n);
      sym(i, j) = sym(j, i) = r;
      s.basis_.push_back(std::move(sym));
      ComplexMatrix anti = ComplexMatrix::Zero(n, n);
      anti(i, j) = Complex(0.0, r);
      anti(j, i) = Complex(0.0, -r);
      s.basis_.push_back(std::move(anti));
    }
  }
  s.finish();
  return s;
}

OperatorSubspace OperatorSubspace::from_basis(std::vector<ComplexMatrix> basis,
                                              const Tolerances& tol) {
  if (basis.empty()) throw ValidationError("subspace basis must not be empty");
  const Index n = basis.front().rows();
  for (auto& b : basis) {
    if (b.rows() != n || b.cols() != n)
      throw ValidationError("subspace basis elements must share one square shape");
    b = HermitianMatrix::from(b, tol.hermitian).matrix();
  }
  OperatorSubspace s;
  s.n_ = n;
  s.basis_ = std::move(basis);
  s.finish();
  if (numerical_rank(s.gram_, tol.rank) != s.basis_.size())
    throw ValidationError("subspace basis is linearly dependent");
  return s;
}

void OperatorSubspace::finish() {
  const Index d = dim();
  gram_.resize(d, d);
  traces_.resize(d);
  for (Index i = 0; i < d; ++i) {
    traces_(i) = basis_[static_cast<std::size_t>(i)].diagonal().real().sum();
    for (Index j = i; j < d; ++j)
      gram_(i, j) = gram_(j, i) =
          real_inner(basis_[static_cast<std::size_t>(i)], basis_[static_cast<std::size_t>(j)]);
  }
  gram_solver_.compute(gram_);
  orthonormal_ = d > 0 && (gram_ - RealMatrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-14;
  if (is_standard_diagonal(basis_, n_))
    kind_ = SubspaceKind::Diagonal;
  else if (d == n_ * n_)
    kind_ = SubspaceKind::Full;
  else
    kind_ = SubspaceKind::General;
}

ComplexMatrix OperatorSubspace::compose(const RealVector& coords) const {
  if (coords.size() != dim()) throw DimensionError("compose: coordinate length mismatch");
  ComplexMatrix m = ComplexMatrix::Zero(n_, n_);
  if (kind_ == SubspaceKind::Diagonal) {
    m.diagonal() = coords.cast<Complex>();
    return m;
  }
  for (Index i = 0; i < dim(); ++i)
    if (coords(i) != 0.0) m += coords(i) * basis_[static_cast<std::size_t>(i)];
  return m;
}

RealVector OperatorSubspace::expand(const ComplexMatrix& m, double* residual) const {
  if (m.rows() != n_ || m.cols() != n_) throw DimensionError("expand: matrix shape mismatch");
  RealVector c;
  if (kind_ == SubspaceKind::Diagonal) {
    c = m.diagonal().real();
  } else {
    RealVector rhs(dim());
    for (Index i = 0; i < dim(); ++i) rhs(i) = real_inner(basis_[static_cast<std::size_t>(i)], m);
    c = orthonormal_ ? rhs : RealVector(gram_solver_.solve(rhs));
  }
  if (residual) *residual = (m - compose(c)).norm();
  return c;
}

SuperOperator superoperator_from_map(const OperatorSubspace& space,
                                     const std::function<ComplexMatrix(const ComplexMatrix&)>& map,
                                     double closure_tol) {
  const Index d = space.dim();
  SuperOperator op{RealMatrix(d, d)};
  for (Index i = 0; i < d; ++i) {
    const ComplexMatrix image = map(space.basis()[static_cast<std::size_t>(i)]);
    double residual = 0.0;
    op.coords.row(i) = space.expand(image, &residual).transpose();
    if (residual > closure_tol * std::max(1.0, image.norm()))
      throw ValidationError("superoperator image of basis element " + std::to_string(i) +
                            " leaves the subspace (residual " + format_number(residual) + ")");
  }
  return op;
}

ComplexMatrix apply(const OperatorSubspace& space, const SuperOperator& op, const ComplexMatrix& q) {
  double residual = 0.0;
  const RealVector c = space.expand(q, &residual);
  if (residual > Tolerances{}.closure * std::max(1.0, q.norm()))
    throw ValidationError("apply: argument is not an element of the subspace");
  return space.compose(op.apply(c));
}

ComplexMatrix choi_matrix(const OperatorSubspace& space, const SuperOperator& op) {
  if (space.kind() != SubspaceKind::Full)
    throw UnsupportedChainError("choi_matrix: requires the full Hermitian space");
  const Index n = space.ambient_dim();
  ComplexMatrix choi = ComplexMatrix::Zero(n * n, n * n);
  const Complex i_unit(0.0, 1.0);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      // E_ij = H1 + i H2 with H1, H2 Hermitian
      ComplexMatrix e = ComplexMatrix::Zero(n, n);
      e(i, j) = 1.0;
      const ComplexMatrix h1 = 0.5 * (e + e.adjoint());
      const ComplexMatrix h2 = -0.5 * i_unit * (e - e.adjoint());
      const RealVector c1 = space.expand(h1);
      const RealVector c2 = space.expand(h2);
      choi.block(i * n, j * n, n, n) =
          space.compose(op.apply(c1)) + i_unit * space.compose(op.apply(c2));
    }
  }
  return choi;
}

const char* to_string(ChainKind kind) { return kind == ChainKind::QMC ? "qmc" : "qpm"; }

QuantumChain QuantumChain::make(Alphabet alphabet, OperatorSubspace space,
                                std::vector<SuperOperator> letter_ops, Density initial,
                                ChainKind kind, const Tolerances& tol) {
  if (letter_ops.size() != alphabet.size())
    throw ValidationError("chain needs one superoperator per alphabet symbol");
  for (const auto& op : letter_ops)
    if (op.coords.rows() != space.dim() || op.coords.cols() != space.dim())
      throw ValidationError("superoperator coordinate matrix must be " +
                            std::to_string(space.dim()) + "x" + std::to_string(space.dim()));
  if (initial.dim() != space.ambient_dim())
    throw ValidationError("initial density dimension does not match the subspace");
  double residual = 0.0;
  RealVector coords = space.expand(initial.matrix(), &residual);
  if (residual > tol.closure * std::max(1.0, initial.matrix().norm()))
    throw ValidationError("initial density is not an element of the subspace");
  QuantumChain c;
  c.alphabet_ = std::move(alphabet);
  c.space_ = std::move(space);
  c.ops_ = std::move(letter_ops);
  c.initial_ = std::move(initial);
  c.initial_coords_ = std::move(coords);
  c.kind_ = kind;
  return c;
}

SuperOperator QuantumChain::total() const {
  SuperOperator sum{RealMatrix::Zero(space_.dim(), space_.dim())};
  for (const auto& op : ops_) sum.coords += op.coords;
  return sum;
}

QuantumChain QuantumChain::with_initial(const RealVector& coords, DensityKind kind,
                                        const Tolerances& tol) const {
  QuantumChain c = *this;
  c.initial_ = Density::make(space_.compose(coords), kind, tol);
  c.initial_coords_ = coords;
  return c;
}

double chain_eval(const QuantumChain& c, const Word& v) {
  check_word(c.alphabet(), v);
  RealVector x = c.initial_coords();
  for (Symbol a : v) x = c.op(a).apply(x);
  return c.subspace().traces().dot(x);
}

ProcessEvaluator chain_process(const QuantumChain& c) {
  return {c.alphabet(), [c](const Word& v) { return chain_eval(c, v); }};
}

namespace {

void check_positivity(const QuantumChain& c, const ChainValidationOptions& opts,
                      ValidationReport& r) {
  const auto& space = c.subspace();
  const auto& tol = opts.tol;
  switch (space.kind()) {
    case SubspaceKind::Diagonal:
      r.note("positivity: exact check on the diagonal basis");
      for (Symbol a = 0; a < c.alphabet().size(); ++a) {
        const double lo = c.op(a).coords.minCoeff();
        if (lo < -tol.psd)
          r.add("positivity", "mu_" + c.alphabet().name(a) + " has negative coefficient " + format_number(lo));
      }
      return;
    case SubspaceKind::Full:
      r.note("positivity: complete positivity via Choi matrix (sufficient condition)");
      for (Symbol a = 0; a < c.alphabet().size(); ++a) {
        const ComplexMatrix choi = choi_matrix(space, c.op(a));
        const double lo = min_eigenvalue(HermitianMatrix::from(choi, 1e-8 * std::max(1.0, choi.norm())));
        if (lo < -tol.psd * std::max(1.0, choi.norm()))
          r.add("complete_positivity",
                "Choi matrix of mu_" + c.alphabet().name(a) + " has eigenvalue " + format_number(lo));
      }
      return;
    case SubspaceKind::General:
      break;
  }
  // Sampled evidence: random coordinates, keep the PSD elements, test images.
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  const Index d = space.dim();
  std::vector<RealVector> candidates;
  candidates.push_back(c.initial_coords());
  for (Index i = 0; i < d; ++i) candidates.push_back(RealVector::Unit(d, i));
  for (std::size_t s = 0; s < opts.positivity_samples; ++s) {
    RealVector x(d);
    for (Index i = 0; i < d; ++i) x(i) = normal(rng);
    candidates.push_back(x);
  }
  std::size_t tested = 0;
  for (const auto& x : candidates) {
    const auto q = HermitianMatrix::from(space.compose(x), 1e-8);
    if (min_eigenvalue(q) < -tol.psd) continue;
    ++tested;
    for (Symbol a = 0; a < c.alphabet().size(); ++a) {
      const auto image = HermitianMatrix::from(space.compose(c.op(a).apply(x)), 1e-8);
      const double lo = min_eigenvalue(image);
      if (lo < -tol.psd * std::max(1.0, image.matrix().norm())) {
        r.add("positivity", "mu_" + c.alphabet().name(a) +
                                " maps a nonnegative element to one with eigenvalue " + format_number(lo));
        return;
      }
    }
  }
  r.note("positivity: sampled evidence on " + std::to_string(tested) +
         " nonnegative elements (not a proof)");
}

void check_word_bounds(const QuantumChain& c, const ChainValidationOptions& opts,
                       ValidationReport& r) {
  const auto& traces = c.subspace().traces();
  const double tol = opts.tol.eval;
  std::size_t reported = 0;
  // depth-first over words, carrying coordinates
  std::vector<std::pair<Word, RealVector>> stack{{Word{}, c.initial_coords()}};
  while (!stack.empty()) {
    auto [w, x] = std::move(stack.back());
    stack.pop_back();
    const double p = traces.dot(x);
    if ((p < -tol || p > 1.0 + tol) && reported < 16) {
      r.add("word_probability", "tr mu_v Q0 = " + format_number(p) + " for v = '" + c.alphabet().format(w) + "'");
      ++reported;
    }
    if (w.size() == opts.horizon) continue;
    for (Symbol a = c.alphabet().size(); a-- > 0;) {
      Word next = w;
      next.push_back(a);
      stack.emplace_back(std::move(next), c.op(a).apply(x));
    }
  }
  r.note("word probabilities checked up to horizon " + std::to_string(opts.horizon));
}

}  // namespace

ValidationReport validate_chain(const QuantumChain& c, const ChainValidationOptions& opts) {
  ValidationReport r;
  const auto& tol = opts.tol;
  const auto& space = c.subspace();
  const double tr0 = c.initial().hermitian().trace();
  if (std::abs(tr0 - 1.0) > tol.trace) r.add("trace", "tr Q0 = " + format_number(tr0));

  const SuperOperator mu = c.total();
  // tr μ(Q_i) = Σ_j A_ij tr Q_j must equal tr Q_i
  const RealVector image_traces = mu.coords * space.traces();
  for (Index i = 0; i < space.dim(); ++i) {
    const double defect = std::abs(image_traces(i) - space.traces()(i));
    if (defect > tol.eval)
      r.add("trace_preservation", "tr mu(Q_" + std::to_string(i) + ") differs from tr Q_" +
                                      std::to_string(i) + " by " + format_number(defect));
  }

  if (c.kind() == ChainKind::QMC) {
    const double lo = min_eigenvalue(c.initial().hermitian());
    if (lo < -tol.psd) r.add("positivity", "Q0 has negative eigenvalue " + format_number(lo));
    check_positivity(c, opts, r);
  } else {
    check_word_bounds(c, opts, r);
  }
  return r;
}

QuantumChain unitary_to_qmc(const ComplexMatrix& u, const Density& initial,
                            const Alphabet& alphabet, const Tolerances& tol) {
  if (alphabet.size() != 1) throw ValidationError("unitary evolution uses a single-letter alphabet");
  if (!is_unitary(u, tol.unitary)) throw ValidationError("unitary_to_qmc: operator is not unitary");
  if (initial.kind() != DensityKind::Quantum)
    throw ValidationError("unitary_to_qmc: initial density must be a quantum density");
  if (u.rows() != initial.dim()) throw DimensionError("unitary_to_qmc: dimension mismatch");
  auto space = OperatorSubspace::full(u.rows());
  auto op = superoperator_from_map(space, [&](const ComplexMatrix& q) -> ComplexMatrix {
    return u * q * u.adjoint();
  });
  return QuantumChain::make(alphabet, std::move(space), {std::move(op)}, initial, ChainKind::QMC, tol);
}

QuantumChain povm_to_qmc(const std::vector<ComplexMatrix>& ops, const Alphabet& alphabet,
                         const Density& initial, const Tolerances& tol) {
  if (ops.size() != alphabet.size()) throw ValidationError("povm_to_qmc: one operator per symbol");
  if (initial.kind() != DensityKind::Quantum)
    throw ValidationError("povm_to_qmc: initial density must be a quantum density");
  const Index n = initial.dim();
  ComplexMatrix completeness = ComplexMatrix::Zero(n, n);
  for (const auto& m : ops) {
    if (m.rows() != n || m.cols() != n) throw DimensionError("povm_to_qmc: operator shape mismatch");
    completeness += m.adjoint() * m;
  }
  const double defect = (completeness - ComplexMatrix::Identity(n, n)).norm();
  if (defect > tol.unitary)
    throw ValidationError("povm_to_qmc: sum_a M_a* M_a differs from I by " + format_number(defect));
  auto space = OperatorSubspace::full(n);
  std::vector<SuperOperator> letter_ops;
  for (const auto& m : ops)
    letter_ops.push_back(superoperator_from_map(space, [&](const ComplexMatrix& q) -> ComplexMatrix {
      return m * q * m.adjoint();
    }));
  return QuantumChain::make(alphabet, std::move(space), std::move(letter_ops), initial,
                            ChainKind::QMC, tol);
}

QuantumChain qrw_to_qmc(const QrwParam& q, const Tolerances& tol) {
  auto report = validate_qrw(q, tol);
  if (!report.ok()) throw ValidationError(std::move(report));
  const Index k = q.edge_dim();
  auto space = OperatorSubspace::full(k);
  std::vector<SuperOperator> letter_ops;
  for (Symbol a = 0; a < q.alphabet.size(); ++a) {
    const ComplexMatrix pu = node_projector(q, a) * q.unitary;
    letter_ops.push_back(superoperator_from_map(space, [&](const ComplexMatrix& x) -> ComplexMatrix {
      return pu * x * pu.adjoint();
    }));
  }
  Tolerances t = tol;
  t.trace = std::max(t.trace, 4 * tol.trace);
  auto initial = Density::make(q.initial * q.initial.adjoint(), DensityKind::Quantum, t);
  return QuantumChain::make(q.alphabet, std::move(space), std::move(letter_ops), std::move(initial),
                            ChainKind::QMC, tol);
}

QuantumChain hmm_to_qmc(const HmmParam& h) {
  const FinitaryParam f = hmm_to_finitary(h);  // validates
  const Index n = static_cast<Index>(h.states.size());
  std::vector<SuperOperator> letter_ops;
  for (const auto& m : f.letters) letter_ops.push_back({m});
  auto initial = Density::make(h.initial.cast<Complex>().asDiagonal().toDenseMatrix(),
                               DensityKind::Quantum);
  return QuantumChain::make(h.alphabet, OperatorSubspace::diagonal(n), std::move(letter_ops),
                            std::move(initial), ChainKind::QMC);
}

QuantumChain finitary_to_qpm(const FinitaryParam& f, std::size_t horizon, const Tolerances& tol) {
  const ProcessEvaluator p = finitary_process(f);
  const std::size_t L = horizon > 0 ? horizon : std::max<std::size_t>(1, static_cast<std::size_t>(f.dimension()));
  const TruncatedHankel h = build_hankel(p, L, L);
  const std::vector<Word> rows = select_row_basis(h, tol.rank);
  const auto d = static_cast<Index>(rows.size());
  const auto ncols = static_cast<Index>(h.col_words.size());

  // basis(j, w) = p_j(w) = p(v_j w) / p(v_j)
  RealMatrix basis(d, ncols);
  RealVector pv(d);
  for (Index j = 0; j < d; ++j) {
    pv(j) = p(rows[static_cast<std::size_t>(j)]);
    for (Index w = 0; w < ncols; ++w)
      basis(j, w) = p(concat(rows[static_cast<std::size_t>(j)], h.col_words[static_cast<std::size_t>(w)])) / pv(j);
  }
  const auto solver = basis.transpose().colPivHouseholderQr();
  auto solve = [&](const RealVector& target, const std::string& what) {
    RealVector coeffs = solver.solve(target);
    const double residual = (basis.transpose() * coeffs - target).cwiseAbs().maxCoeff();
    if (residual > tol.residual)
      throw BasisInsufficiencyError("finitary_to_qpm: residual " + format_number(residual) + " for " + what);
    return coeffs;
  };

  std::vector<SuperOperator> letter_ops;
  for (Symbol a = 0; a < f.alphabet.size(); ++a) {
    RealMatrix alpha(d, d);
    for (Index i = 0; i < d; ++i) {
      RealVector target(ncols);
      const Word va = concat(rows[static_cast<std::size_t>(i)], Word{a});
      for (Index w = 0; w < ncols; ++w)
        target(w) = p(concat(va, h.col_words[static_cast<std::size_t>(w)])) / pv(i);
      alpha.row(i) = solve(target, "shift of basis row " + std::to_string(i)).transpose();
    }
    letter_ops.push_back({std::move(alpha)});
  }
  RealVector target(ncols);
  for (Index w = 0; w < ncols; ++w) target(w) = p(h.col_words[static_cast<std::size_t>(w)]);
  const RealVector alpha0 = solve(target, "the process itself");

  auto initial = Density::make(alpha0.cast<Complex>().asDiagonal().toDenseMatrix(),
                               DensityKind::Generalized, tol);
  return QuantumChain::make(f.alphabet, OperatorSubspace::diagonal(d), std::move(letter_ops),
                            std::move(initial), ChainKind::QPM, tol);
}

FinitaryParam qpm_to_finitary(const QuantumChain& c) {
  FinitaryParam f;
  f.alphabet = c.alphabet();
  for (const auto& op : c.letter_ops()) f.letters.push_back(op.coords);
  f.initial = c.initial_coords();
  f.end = c.subspace().traces();
  return f;
}

}  // namespace qpm
