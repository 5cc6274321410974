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

#include "qpm/asymptotics.hpp"

#include <cmath>
#include <string>

namespace qpm {
namespace {

using ExtMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using ExtVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

double hs_distance(const OperatorSubspace& space, const RealVector& a, const RealVector& b) {
  const RealVector d = a - b;
  return std::sqrt(std::max(0.0, space.inner(d, d)));
}

struct Limit {
  RealVector coords;
  std::uint64_t iterations = 0;
  std::size_t krylov_dim = 0;
  std::size_t unit_multiplicity = 0;
  double spectral_gap = 0.0;
};

Limit iterative_limit(const QuantumChain& c, const CesaroOptions& opts) {
  const auto& space = c.subspace();
  // Column operator x -> A^T x in extended precision.
  const ExtMatrix f = c.total().coords.transpose().cast<long double>();
  const ExtMatrix gram = space.gram().cast<long double>();
  auto norm = [&](const ExtVector& v) {
    return std::sqrt(std::max<long double>(0, v.dot(gram * v)));
  };

  // μ preserves traces; squaring would otherwise amplify the rounding
  // defect of τᵀμ = τᵀ exponentially in the number of doublings.
  const ExtVector tau = space.traces().cast<long double>();
  const long double tau_sq = tau.squaredNorm();
  auto restore_trace = [&](ExtMatrix& m) {
    if (tau_sq > 0) m += tau * ((tau.transpose() - tau.transpose() * m) / tau_sq);
  };

  ExtMatrix power = f;                                  // μ^t
  restore_trace(power);
  ExtVector avg = f * c.initial_coords().cast<long double>();  // s_t
  const long double scale = std::max<long double>(1, norm(avg));
  std::uint64_t t = 1;
  int calm = 0;  // consecutive checkpoints below tol
  while (true) {
    if (opts.stop.stop_requested()) throw NumericError("cesaro_limit: cancelled");
    if (t >= opts.t_max)
      throw NumericError("cesaro_limit: no convergence up to t = " + std::to_string(t));
    ExtVector next = (avg + power * avg) / 2;
    const long double delta = norm(next - avg);
    avg = std::move(next);
    power = (power * power).eval();
    restore_trace(power);
    t *= 2;
    if (!std::isfinite(static_cast<double>(delta)) || power.cwiseAbs().maxCoeff() > 1e12L)
      throw DivergenceError("cesaro_limit: powers of mu grow without bound");
    calm = delta <= opts.tol * scale ? calm + 1 : 0;
    if (calm >= 2) break;
  }
  Limit out;
  out.coords = avg.cast<double>();
  out.iterations = t;
  return out;
}

Limit spectral_limit(const QuantumChain& c, const CesaroOptions& opts) {
  const auto& space = c.subspace();
  const Index d = space.dim();
  // Orthonormal coordinates z = R x with G = R^T R.
  Eigen::LLT<RealMatrix> llt(space.gram());
  if (llt.info() != Eigen::Success) throw NumericError("cesaro_limit: singular subspace Gram matrix");
  const RealMatrix r = llt.matrixU();
  const RealMatrix r_inv = r.triangularView<Eigen::Upper>().solve(RealMatrix::Identity(d, d));
  const RealMatrix f = r * c.total().coords.transpose() * r_inv;

  // V = span{μ^t Q0} by Gram-Schmidt with reorthogonalization.
  const RealVector z0 = r * c.initial_coords();
  const double z0_norm = z0.norm();
  RealMatrix basis(d, 0);
  RealVector v = z0 / z0_norm;
  while (basis.cols() < d) {
    basis.conservativeResize(d, basis.cols() + 1);
    basis.col(basis.cols() - 1) = v;
    RealVector w = f * v;
    const double wn = w.norm();
    for (int pass = 0; pass < 2; ++pass) w -= basis * (basis.transpose() * w);
    if (w.norm() <= 1e-10 * std::max(1.0, wn)) break;
    v = w / w.norm();
  }
  const Index m = basis.cols();
  const RealMatrix h = basis.transpose() * f * basis;

  Eigen::EigenSolver<RealMatrix> eig(h, false);
  if (eig.info() != Eigen::Success) throw NumericError("cesaro_limit: eigensolver failed");
  std::size_t unit = 0;
  double gap = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < m; ++i) {
    const Complex lambda = eig.eigenvalues()(i);
    if (std::abs(lambda) > 1.0 + 1e-7)
      throw DivergenceError("cesaro_limit: eigenvalue of modulus " + format_number(std::abs(lambda)) + " > 1");
    const double dist = std::abs(lambda - 1.0);
    if (dist <= opts.cluster_tol)
      ++unit;
    else
      gap = std::min(gap, dist);
  }
  if (unit == 0) throw ConsistencyError("cesaro_limit: mu has no eigenvalue 1 on span{mu^t Q0}");

  const RealMatrix shifted = h - RealMatrix::Identity(m, m);
  Eigen::JacobiSVD<RealMatrix> svd(shifted, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  std::size_t kernel = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) <= opts.cluster_tol) ++kernel;
  if (kernel < unit)
    throw ConsistencyError("cesaro_limit: eigenvalue 1 is defective (Jordan block), algebraic " +
                           std::to_string(unit) + " vs geometric " + std::to_string(kernel));
  const auto k = static_cast<Index>(kernel);
  // Q0 = kernel part + range part; singular values are sorted descending.
  RealMatrix split(m, m);
  split.leftCols(k) = svd.matrixV().rightCols(k);
  split.rightCols(m - k) = svd.matrixU().leftCols(m - k);
  RealVector e0 = RealVector::Zero(m);
  e0(0) = z0_norm;
  const RealVector parts = split.colPivHouseholderQr().solve(e0);
  const RealVector limit_v = split.leftCols(k) * parts.head(k);

  Limit out;
  out.coords = r_inv * (basis * limit_v);
  out.krylov_dim = static_cast<std::size_t>(m);
  out.unit_multiplicity = unit;
  out.spectral_gap = std::isfinite(gap) ? gap : 0.0;
  return out;
}

}  // namespace

BoundednessReport boundedness_probe(const QuantumChain& c, std::size_t steps, double growth_factor) {
  BoundednessReport rep;
  const auto& space = c.subspace();
  const SuperOperator mu = c.total();
  RealVector x = c.initial_coords();
  rep.monotone = true;
  for (std::size_t t = 0; t <= steps; ++t) {
    const double purity = space.inner(x, x);
    if (!rep.purities.empty() && purity < rep.purities.back()) rep.monotone = false;
    rep.purities.push_back(purity);
    rep.max_purity = std::max(rep.max_purity, purity);
    if (!std::isfinite(purity)) break;
    x = mu.apply(x);
  }
  const std::size_t last = rep.purities.size() - 1;
  if (!std::isfinite(rep.purities.back())) {
    rep.growth_detected = true;
    rep.max_purity = std::numeric_limits<double>::infinity();
  } else if (last >= 4) {
    const double p_full = rep.purities[last];
    const double p_half = rep.purities[last / 2];
    const double p_quarter = rep.purities[last / 4];
    rep.growth_detected = p_full > growth_factor * p_half && p_half > growth_factor * p_quarter;
  }
  return rep;
}

const char* to_string(CesaroMethod m) {
  return m == CesaroMethod::Iterative ? "iterative" : "spectral";
}

CesaroResult cesaro_limit(const QuantumChain& c, const CesaroOptions& opts) {
  if (!opts.assume_bounded) {
    const auto probe = boundedness_probe(c, opts.probe_steps);
    if (probe.growth_detected)
      throw DivergenceError("cesaro_limit: boundedness probe detected growth (max purity " +
                            format_number(probe.max_purity) + ")");
  }
  const auto& space = c.subspace();
  const Limit primary =
      opts.method == CesaroMethod::Iterative ? iterative_limit(c, opts) : spectral_limit(c, opts);

  CesaroResult res;
  res.method = opts.method;
  res.coords = primary.coords;
  res.iterations = primary.iterations;
  res.krylov_dim = primary.krylov_dim;
  res.unit_multiplicity = primary.unit_multiplicity;
  res.spectral_gap = primary.spectral_gap;
  if (opts.cross_check) {
    const Limit other =
        opts.method == CesaroMethod::Iterative ? spectral_limit(c, opts) : iterative_limit(c, opts);
    res.method_discrepancy = hs_distance(space, primary.coords, other.coords);
    if (opts.method == CesaroMethod::Iterative) {
      res.krylov_dim = other.krylov_dim;
      res.unit_multiplicity = other.unit_multiplicity;
      res.spectral_gap = other.spectral_gap;
    } else {
      res.iterations = other.iterations;
    }
    if (res.method_discrepancy > 10 * opts.tol)
      throw ConsistencyError("cesaro_limit: iterative and spectral limits differ by " +
                             format_number(res.method_discrepancy));
  }
  res.stationarity_residual = hs_distance(space, c.total().apply(res.coords), res.coords);

  Tolerances tol;
  tol.trace = 1e-8;
  tol.psd = 1e-8;
  tol.hermitian = 1e-8;
  const ComplexMatrix m = space.compose(res.coords);
  const DensityKind kind = c.kind() == ChainKind::QMC ? DensityKind::Quantum : DensityKind::Generalized;
  auto report = Density::check(m, kind, tol);
  if (!report.ok())
    throw ConsistencyError("cesaro_limit: limit is not a valid " + std::string(to_string(kind)) +
                           " density: " + report.findings.front().message);
  res.limit = Density::make(m, kind, tol);
  return res;
}

double limit_functional(const CesaroResult& r, const ComplexMatrix& x) {
  if (x.rows() != r.limit.dim() || x.cols() != r.limit.dim())
    throw DimensionError("limit_functional: observable dimension mismatch");
  return (x * r.limit.matrix()).trace().real();
}

double stationary_word_probability(const QuantumChain& c, const CesaroResult& r, const Word& v) {
  check_word(c.alphabet(), v);
  if (r.coords.size() != c.subspace().dim())
    throw DimensionError("stationary_word_probability: result belongs to another chain");
  RealVector x = r.coords;
  for (Symbol a : v) x = c.op(a).apply(x);
  return c.subspace().traces().dot(x);
}

RealVector stationary_letter_distribution(const QuantumChain& c, const CesaroResult& r) {
  RealVector out(static_cast<Index>(c.alphabet().size()));
  for (Symbol a = 0; a < c.alphabet().size(); ++a)
    out(static_cast<Index>(a)) = stationary_word_probability(c, r, Word{a});
  return out;
}

}  // namespace qpm
