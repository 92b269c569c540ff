// Copyright 2026 The DQE Authors
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

#include "dqe/analytics.hpp"

#include <algorithm>
#include <vector>
#include <cmath>
#include <limits>
#include <string>

#include "dqe/errors.hpp"

namespace dqe {

namespace {

constexpr double kMinRcond = 1e-14;

/// sum_{j<n} x^j for x in [0, 1].
double geometric_sum(double x, std::int64_t n) {
  const double nn = static_cast<double>(n);
  if (n == 0) return 0.0;
  if (x >= 1.0) return nn;
  if (x <= 0.0) return 1.0;
  return -std::expm1(nn * std::log1p(x - 1.0)) / (1.0 - x);
}

Eigen::SelfAdjointEigenSolver<Mat> hermitian_eigen(const Mat& k) {
  if (k.rows() != k.cols()) fail(ErrorKind::kParameter, "K must be square");
  double asym = (k - k.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * std::max(1.0, k.cwiseAbs().maxCoeff())) {
    fail(ErrorKind::kInvalidAgsp, "K is not Hermitian");
  }
  return Eigen::SelfAdjointEigenSolver<Mat>(hermitian_part(k));
}

void check_transfer_pair(const TransferMatrix& e0, const TransferMatrix& e1,
                         const Mat* rho0) {
  if (e0.dim != e1.dim || e0.matrix.rows() != e1.matrix.rows()) {
    fail(ErrorKind::kParameter, "E0 and E1 act on different spaces");
  }
  if (rho0 != nullptr && rho0->rows() != e0.dim) {
    fail(ErrorKind::kParameter, "initial state has the wrong dimension");
  }
}

/// S = sum_{j<n} E^j and P = E^n by binary doubling.
struct GeometricPowers {
  Mat s;
  Mat p;
};

GeometricPowers geometric_powers(const Mat& e, std::int64_t n) {
  const Index d = e.rows();
  GeometricPowers g{Mat::Zero(d, d), dqe::identity(d)};
  std::int64_t k = 0;
  for (int bit = 62; bit >= 0; --bit) {
    if (k > 0) {
      g.s += g.p * g.s;
      g.p = g.p * g.p;
      k *= 2;
    }
    if ((n >> bit) & 1) {
      g.s += g.p;
      g.p = e * g.p;
      ++k;
    }
  }
  return g;
}

Eigen::PartialPivLU<Mat> factor_checked(const Mat& a, const char* what,
                                        double* rcond_out) {
  Eigen::PartialPivLU<Mat> lu(a);
  double rcond = lu.rcond();
  if (rcond_out != nullptr) *rcond_out = std::min(*rcond_out, rcond);
  if (!(rcond >= kMinRcond)) {
    throw IllConditionedError(std::string(what) + " is singular to working "
                                                  "precision (rcond " +
                                  std::to_string(rcond) + ")",
                              rcond);
  }
  return lu;
}

}  // namespace

Mat expected_state_global(const Mat& k, std::int64_t n) {
  if (n < 0) fail(ErrorKind::kParameter, "run length must be >= 0");
  const Index d = k.rows();
  if (n == 0) return dqe::identity(d) / double(d);
  auto es = hermitian_eigen(k);
  const RVec& lam = es.eigenvalues();
  RVec logw(d);
  double top = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < d; ++i) {
    logw(i) = 2.0 * double(n) * std::log(std::abs(lam(i)));
    top = std::max(top, logw(i));
  }
  if (!std::isfinite(top)) {
    fail(ErrorKind::kDegenerateInstance, "K annihilates every state");
  }
  RVec w = (logw.array() - top).exp().matrix();
  Mat v = es.eigenvectors();
  Mat rho = v * w.asDiagonal() * v.adjoint();
  return hermitian_part(rho / w.sum());
}

double expected_overlap_global(const Mat& k, const Mat& pi0, std::int64_t n) {
  return (pi0 * expected_state_global(k, n)).trace().real();
}

double expected_tau_global(const Mat& k, std::int64_t n) {
  if (n < 0) fail(ErrorKind::kParameter, "run length must be >= 0");
  if (n == 0) return 0.0;
  auto es = hermitian_eigen(k);
  const RVec& lam = es.eigenvalues();
  const Index d = lam.size();
  double num = 0.0;
  RVec logx(d);
  double top = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < d; ++i) {
    double x = lam(i) * lam(i);
    if (x > 1.0 + 1e-12) {
      fail(ErrorKind::kInvalidAgsp, "K has norm above 1");
    }
    x = std::min(x, 1.0);
    num += geometric_sum(x, n);
    logx(i) = double(n) * std::log(x);
    top = std::max(top, logx(i));
  }
  if (!std::isfinite(top)) {
    fail(ErrorKind::kDegenerateInstance, "K annihilates every state");
  }
  double log_den = top + std::log((logx.array() - top).exp().sum());
  return num * std::exp(-log_den);
}

double expected_tau_bound(const AgspParams& params, double dim,
                          double degeneracy, std::int64_t n) {
  if (params.gamma <= 0.0) return std::numeric_limits<double>::infinity();
  double inner = double(n) + geometric_sum(params.delta, n) *
                                 (dim / degeneracy - 1.0);
  return inner * std::exp(-double(n) * std::log(params.gamma));
}

BoundValue overlap_lower_bound(const AgspParams& params, double dim,
                               double degeneracy, std::int64_t n) {
  if (params.gamma <= params.delta) return {0.0, true};
  double tail =
      (dim / degeneracy) * std::pow(params.delta / params.gamma, double(n));
  const double raw = 1.0 - params.epsilon - tail;
  return {std::clamp(raw, 0.0, 1.0), raw <= 0.0};
}

std::int64_t depth_estimate(const AgspParams& params, double dim,
                            double degeneracy, double target_error) {
  if (params.gamma <= params.delta) {
    fail(ErrorKind::kParameter, "Gamma <= Delta: no finite depth");
  }
  if (!(target_error > 0.0)) {
    fail(ErrorKind::kParameter, "target error must be positive");
  }
  const double lead = dim / degeneracy;
  if (lead <= target_error) return 0;
  if (params.delta == 0.0) return 1;
  const double ratio = params.delta / params.gamma;
  auto tail = [&](std::int64_t n) { return lead * std::pow(ratio, double(n)); };
  auto n = static_cast<std::int64_t>(
      std::ceil(std::log(lead / target_error) / std::log(1.0 / ratio)));
  n = std::max<std::int64_t>(n, 1);
  while (n > 1 && tail(n - 1) <= target_error) --n;
  while (tail(n) > target_error) ++n;
  return n;
}

double fixed_point_overlap_bound(const AgspParams& params, double dim,
                                 double degeneracy) {
  double den = (params.gamma - params.delta) +
               (dim / degeneracy) * (1.0 - params.gamma);
  if (den <= 0.0) return degeneracy / dim - params.epsilon;
  return (1.0 - params.delta) / den - params.epsilon;
}

Mat chebyshev_fixed_point_operator(const SpectralData& spectral, int ell) {
  double shrink = 1.0 - double(spectral.degeneracy) / double(spectral.dimension);
  return agsp_chebyshev(spectral, ell).op * shrink;
}

BoundValue chebyshev_fixed_point_bound(const SpectralData& spectral, int ell) {
  double width = spectral.norm - spectral.lambda0;
  double a = 1.0 - 4.0 * std::exp(-4.0 * ell * std::sqrt(spectral.gap / width));
  if (a <= 0.0) return {0.0, true};
  double ratio = double(spectral.dimension) / double(spectral.degeneracy);
  return {1.0 - (1.0 / ratio) / a * (ratio - 1.0), false};
}

void check_resampling_condition(const TransferMatrix& e0,
                                const TransferMatrix& e1, const Mat& rho0) {
  check_transfer_pair(e0, e1, &rho0);
  Vec sigma = e1.matrix * vec(rho0);
  Eigen::RowVectorXcd one = trace_row(e0.dim);
  double weight = (one * sigma)(0).real();
  if (weight < 1e-15) return;
  double p0 = (one * (e0.matrix * sigma))(0).real() / weight;
  if (!(p0 > 1e-12)) {
    throw IllConditionedError(
        "resampled state can never produce a 0 outcome; the stopped process "
        "does not terminate",
        0.0);
  }
}

GeneralExpectation expected_general(const TransferMatrix& e0,
                                    const TransferMatrix& e1, const Mat& rho0,
                                    std::int64_t n) {
  if (n < 0) fail(ErrorKind::kParameter, "run length must be >= 0");
  check_resampling_condition(e0, e1, rho0);
  const Index dim = e0.dim;
  const Index d2 = e0.matrix.rows();
  GeometricPowers g = geometric_powers(e0.matrix, n);
  Mat w = dqe::identity(d2) - e1.matrix * g.s;
  GeneralExpectation out;
  out.rcond = 1.0;
  auto lu = factor_checked(w, "W", &out.rcond);

  Vec x = lu.solve(vec(rho0));
  Vec final_vec = g.p * x;
  out.state = hermitian_part(unvec(final_vec, dim));

  Eigen::RowVectorXcd one_p = trace_row(dim) * g.p;
  // sum_{j<n} (j+1) E0^j x by repeated matrix-vector products.
  Vec weighted = Vec::Zero(d2);
  Vec power = x;
  for (std::int64_t j = 0; j < n; ++j) {
    weighted += double(j + 1) * power;
    if (j + 1 < n) power = e0.matrix * power;
  }
  Vec tail = lu.solve(e1.matrix * weighted);
  out.tau = (double(n) * (one_p * x)(0) + (one_p * tail)(0)).real();
  return out;
}

Mat expected_state_general(const TransferMatrix& e0, const TransferMatrix& e1,
                           const Mat& rho0, std::int64_t n) {
  return expected_general(e0, e1, rho0, n).state;
}

double expected_tau_general(const TransferMatrix& e0, const TransferMatrix& e1,
                            const Mat& rho0, std::int64_t n) {
  return expected_general(e0, e1, rho0, n).tau;
}

GeneralExpectation expected_general_factored(const TransferMatrix& e0,
                                             const TransferMatrix& e1,
                                             const Mat& rho0, std::int64_t n) {
  if (n < 0) fail(ErrorKind::kParameter, "run length must be >= 0");
  check_resampling_condition(e0, e1, rho0);
  const Index dim = e0.dim;
  const Index d2 = e0.matrix.rows();
  const Mat id = dqe::identity(d2);
  Mat p = matrix_power(e0.matrix, static_cast<std::uint64_t>(n));
  Mat one_minus_e0 = id - e0.matrix;
  Mat a = one_minus_e0 - e1.matrix + e1.matrix * p;
  GeneralExpectation out;
  out.rcond = 1.0;
  auto lu_a = factor_checked(a, "1 - E0 - E1 + E1 E0^n", &out.rcond);
  auto lu_b = factor_checked(one_minus_e0, "1 - E0", &out.rcond);

  Vec x = lu_a.solve(vec(rho0));
  out.state = hermitian_part(unvec(p * (one_minus_e0 * x), dim));

  Vec v = lu_b.solve(x);
  v = (id - p) * v;
  v = lu_a.solve(e1.matrix * v);
  v = p * (one_minus_e0 * v);
  out.tau = (trace_row(dim) * v)(0).real();
  return out;
}

double stopped_map_trace_defect(const TransferMatrix& e0,
                                const TransferMatrix& e1, std::int64_t n) {
  check_transfer_pair(e0, e1, nullptr);
  const Index d2 = e0.matrix.rows();
  GeometricPowers g = geometric_powers(e0.matrix, n);
  Mat w = dqe::identity(d2) - e1.matrix * g.s;
  auto lu = factor_checked(w.transpose(), "W", nullptr);
  Eigen::RowVectorXcd one = trace_row(e0.dim);
  Vec rhs = (one * g.p).transpose();
  Vec row = lu.solve(rhs);
  return (row.transpose() - one).cwiseAbs().maxCoeff();
}

double failure_map_trace_defect(const TransferMatrix& e0,
                                const TransferMatrix& e1) {
  check_transfer_pair(e0, e1, nullptr);
  const Index d2 = e0.matrix.rows();
  Mat b = dqe::identity(d2) - e0.matrix;
  auto lu = factor_checked(b.transpose(), "1 - E0", nullptr);
  Eigen::RowVectorXcd one = trace_row(e0.dim);
  Vec rhs = (one * e1.matrix).transpose();
  Vec row = lu.solve(rhs);
  return (row.transpose() - one).cwiseAbs().maxCoeff();
}

double sequence_probability(const TransferMatrix& e0, const TransferMatrix& e1,
                            const Mat& rho0, std::int64_t n) {
  check_transfer_pair(e0, e1, &rho0);
  const Index d2 = e0.matrix.rows();
  GeometricPowers g = geometric_powers(e0.matrix, n);
  Mat w = dqe::identity(d2) - e1.matrix * g.s;
  auto lu_w = factor_checked(w, "W", nullptr);
  auto lu_b = factor_checked(dqe::identity(d2) - e0.matrix, "1 - E0", nullptr);
  Vec v = g.p * lu_w.solve(vec(rho0));
  v = lu_w.solve(e1.matrix * lu_b.solve(v));
  return (trace_row(e0.dim) * (g.p * v))(0).real();
}

SweepTransfer sweep_transfer(const PauliHamiltonian& h, AgspMode mode,
                             double eps, Weighting weighting,
                             ResamplingScope scope, int micro_steps) {
  const int n = h.num_qubits();
  require_transfer_dim(h.dimension());
  SweepTransfer out;
  if (mode == AgspMode::kLinearGlobal) {
    const Index d = h.dimension();
    Mat k = (dqe::identity(d) - to_dense(h) / h.kappa()) / 2.0;
    Instrument inst = make_global_instrument(k, Resampler::global(n));
    out.e0 = transfer_of_instrument_success(inst);
    out.e1 = transfer_of_instrument_failure(inst);
    return out;
  }
  TermInstruments terms;
  for (const LocalFactor& f : pauli_factors(h, weighting)) {
    Resampler r = scope == ResamplingScope::kGlobal ? Resampler::global(n)
                                                    : Resampler::local(f.support);
    terms.terms.push_back(make_weak_instrument(f, eps, n, r));
  }
  return sweep_transfer_of(terms, mode, micro_steps);
}

namespace {

/// One instrument's success and failure maps, acting on vectorized states.
/// Local maps act on the ket qubits and their bra partners of the doubled
/// register; a global reset is rank one and kept implicit.
struct SweepTerm {
  Mat success;               ///< local transfer of the success branch
  std::vector<int> qubits;   ///< doubled-register qubits of `success`
  bool global_reset = false; ///< failure = |1/D>> (<<1| - <<1| success)
  Mat failure;               ///< local failure-then-resample transfer
  Mat dense_failure;         ///< fallback for resamplers not on the support
};

Mat local_transfer(const std::vector<Mat>& ops) {
  const Index d = ops.front().rows();
  Mat t = Mat::Zero(d * d, d * d);
  for (const Mat& a : ops) t += kron(a.conjugate(), a);
  return t;
}

SweepTerm sweep_term(const Instrument& inst) {
  SweepTerm t;
  const int n = inst.num_qubits;
  // Column-stacking vec: bra index is the high half of the doubled register.
  for (int q : inst.support) t.qubits.push_back(q);
  for (int q : inst.support) t.qubits.push_back(n + q);
  t.success = local_transfer(inst.success);
  const Resampler& r = inst.resampler;
  if (r.kind == ResamplerKind::kGlobalMaximallyMixed) {
    t.global_reset = true;
  } else if (r.kind == ResamplerKind::kIdentity) {
    t.failure = local_transfer(inst.failure);
  } else if (r.kind == ResamplerKind::kLocalMaximallyMixed &&
             r.qubits == inst.support) {
    const Index d = Index{1} << inst.support.size();
    Mat reset = vec(dqe::identity(d) / double(d)) * trace_row(d);
    t.failure = reset * local_transfer(inst.failure);
  } else {
    t.dense_failure = transfer_of_instrument_failure(inst).matrix;
  }
  return t;
}

}  // namespace

SweepTransfer sweep_transfer_of(const TermInstruments& terms, AgspMode mode,
                                int micro_steps) {
  if (terms.terms.empty()) fail(ErrorKind::kParameter, "no instruments");
  if (mode == AgspMode::kLinearGlobal) {
    fail(ErrorKind::kParameter, "per-term sweeps need product or mixture mode");
  }
  const auto m = static_cast<int>(terms.terms.size());
  const int n = terms.terms.front().num_qubits;
  const Index dim = Index{1} << n;
  require_transfer_dim(dim);
  const Index d2 = dim * dim;
  std::vector<SweepTerm> parts;
  for (const Instrument& inst : terms.terms) parts.push_back(sweep_term(inst));
  const Vec mixed = vec(dqe::identity(dim) / double(dim));
  const Eigen::RowVectorXcd tr = trace_row(dim);

  // Applies term i to the columns of x; adds its failure image to *fail_out.
  auto step = [&](int i, const Mat& x, Mat* fail_out) {
    const SweepTerm& t = parts[static_cast<std::size_t>(i)];
    Mat y = apply_local_left(t.success, t.qubits, 2 * n, x);
    if (t.global_reset) {
      *fail_out += mixed * (tr * x - tr * y);
    } else if (t.dense_failure.size() > 0) {
      *fail_out += t.dense_failure * x;
    } else {
      *fail_out += apply_local_left(t.failure, t.qubits, 2 * n, x);
    }
    return y;
  };

  Mat s0 = dqe::identity(d2);
  Mat s1 = Mat::Zero(d2, d2);
  if (mode == AgspMode::kProductSweep) {
    for (int i = 0; i < m; ++i) s0 = step(i, s0, &s1);
    for (int i = m - 1; i >= 0; --i) s0 = step(i, s0, &s1);
  } else {
    const int steps = micro_steps > 0 ? micro_steps : 2 * m;
    for (int j = 0; j < steps; ++j) {
      Mat next = Mat::Zero(d2, d2);
      Mat failed = Mat::Zero(d2, d2);
      for (int i = 0; i < m; ++i) next += step(i, s0, &failed);
      s0 = next / double(m);
      s1 += failed / double(m);
    }
  }
  SweepTransfer out;
  out.e0 = {s0, false, dim};
  out.e1 = {s1, false, dim};
  out.e0.trace_preserving = is_trace_preserving(s0, dim);
  out.e1.trace_preserving = is_trace_preserving(s1, dim);
  return out;
}

Mat expected_state_decaying(const PauliHamiltonian& h, double eps,
                            Weighting weighting, std::int64_t n) {
  if (n < 0) fail(ErrorKind::kParameter, "run length must be >= 0");
  const Index d = h.dimension();
  Mat m = dqe::identity(d);
  for (std::int64_t j = 1; j <= n; ++j) {
    m = agsp_product(h, eps / double(j), weighting).op * m;
  }
  Mat rho = m * m.adjoint();
  return hermitian_part(rho / rho.trace().real());
}

}  // namespace dqe
