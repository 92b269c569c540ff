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

#include "dqe/instrument.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dqe/errors.hpp"

namespace dqe {

namespace {

std::vector<int> all_qubits(int n) {
  std::vector<int> q(static_cast<std::size_t>(n));
  std::iota(q.begin(), q.end(), 0);
  return q;
}

Mat kraus_sum(const std::vector<Mat>& ops, Index dim) {
  Mat s = Mat::Zero(dim, dim);
  for (const Mat& a : ops) s += a.adjoint() * a;
  return s;
}

}  // namespace

Resampler Resampler::global(int num_qubits) {
  Resampler r;
  r.kind = ResamplerKind::kGlobalMaximallyMixed;
  r.min_support = std::ldexp(1.0, -num_qubits);
  return r;
}

Resampler Resampler::local(std::vector<int> qubits) {
  Resampler r;
  r.kind = ResamplerKind::kLocalMaximallyMixed;
  r.qubits = std::move(qubits);
  r.min_support = 0.0;
  return r;
}

Resampler Resampler::identity() {
  Resampler r;
  r.kind = ResamplerKind::kIdentity;
  r.min_support = 0.0;
  return r;
}

Resampler Resampler::custom(std::vector<Mat> kraus, double min_support) {
  if (kraus.empty()) fail(ErrorKind::kParameter, "custom resampler is empty");
  const Index dim = kraus.front().rows();
  double defect = spectral_norm(kraus_sum(kraus, dim) - dqe::identity(dim));
  if (defect > 1e-10) {
    fail(ErrorKind::kParameter, "custom resampler Kraus list is not complete");
  }
  Resampler r;
  r.kind = ResamplerKind::kCustomCpt;
  r.kraus = std::move(kraus);
  r.min_support = min_support;
  return r;
}

double Instrument::completeness_defect() const {
  const Index dim = success.front().rows();
  Mat s = kraus_sum(success, dim) + kraus_sum(failure, dim);
  return spectral_norm(s - dqe::identity(dim));
}

Instrument make_instrument(const Mat& e0, std::vector<int> support,
                           int num_qubits, Resampler resampler) {
  double norm = spectral_norm(e0);
  if (norm > 1.0 + 1e-12) {
    fail(ErrorKind::kInvalidAgsp,
         "success operator has norm " + std::to_string(norm) +
             " > 1; rescale the AGSP");
  }
  Instrument inst;
  inst.num_qubits = num_qubits;
  inst.support = std::move(support);
  inst.success = {e0};
  inst.failure = {sqrtm_psd(dqe::identity(e0.rows()) - e0.adjoint() * e0)};
  inst.resampler = std::move(resampler);
  return inst;
}

Instrument make_weak_instrument(const LocalFactor& factor, double eps,
                                int num_qubits, Resampler resampler) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    fail(ErrorKind::kParameter, "eps must lie in [0, 1]");
  }
  const Mat one = dqe::identity(factor.factor.rows());
  const double off = 1.0 - eps;
  const double on = 1.0 - eps + eps * factor.weight;
  Mat e0 = off * one + eps * factor.weight * factor.factor;
  Instrument inst =
      make_instrument(e0, factor.support, num_qubits, std::move(resampler));
  // E0 is diagonal in the projector basis, so E1 has an exact closed form;
  // sqrtm_psd would lose half the digits near zero eigenvalues.
  inst.failure = {std::sqrt(std::max(0.0, 1.0 - off * off)) * (one - factor.factor) +
                  std::sqrt(std::max(0.0, 1.0 - on * on)) * factor.factor};
  return inst;
}

Instrument make_global_instrument(const Mat& k, Resampler resampler) {
  const int n = static_cast<int>(std::lround(std::log2(double(k.rows()))));
  return make_instrument(k, all_qubits(n), n, std::move(resampler));
}

Instrument make_instrument_from_kraus(std::vector<Mat> success,
                                      std::vector<Mat> failure,
                                      std::vector<int> support, int num_qubits,
                                      Resampler resampler) {
  if (success.empty() || failure.empty()) {
    fail(ErrorKind::kInvalidNoise, "instrument branches need Kraus operators");
  }
  Instrument inst;
  inst.num_qubits = num_qubits;
  inst.support = std::move(support);
  inst.success = std::move(success);
  inst.failure = std::move(failure);
  inst.resampler = std::move(resampler);
  if (inst.completeness_defect() > 1e-8) {
    fail(ErrorKind::kInvalidNoise, "instrument violates completeness");
  }
  return inst;
}

void resample(const Resampler& r, int num_qubits, Vec& psi, Rng& rng) {
  const Index dim = psi.size();
  switch (r.kind) {
    case ResamplerKind::kIdentity:
      return;
    case ResamplerKind::kGlobalMaximallyMixed: {
      auto j = static_cast<Index>(rng() % static_cast<std::uint64_t>(dim));
      psi.setZero();
      psi(j) = 1.0;
      return;
    }
    case ResamplerKind::kLocalMaximallyMixed: {
      // Measure the replaced qubits, then overwrite them with random bits.
      std::uint64_t mask = 0;
      for (int q : r.qubits) mask |= std::uint64_t{1} << bit_of(q, num_qubits);
      const std::size_t k = r.qubits.size();
      std::vector<std::uint64_t> offsets(std::size_t{1} << k, 0);
      for (std::size_t l = 0; l < offsets.size(); ++l) {
        for (std::size_t j = 0; j < k; ++j) {
          if ((l >> (k - 1 - j)) & 1U) {
            offsets[l] |= std::uint64_t{1} << bit_of(r.qubits[j], num_qubits);
          }
        }
      }
      std::vector<double> probs(offsets.size(), 0.0);
      for (Index base = 0; base < dim; ++base) {
        auto ub = static_cast<std::uint64_t>(base);
        if (ub & mask) continue;
        for (std::size_t l = 0; l < offsets.size(); ++l) {
          probs[l] += std::norm(psi(static_cast<Index>(ub | offsets[l])));
        }
      }
      double total = std::accumulate(probs.begin(), probs.end(), 0.0);
      double u = uniform01(rng) * total;
      std::size_t pick = 0;
      for (; pick + 1 < probs.size(); ++pick) {
        if (u < probs[pick]) break;
        u -= probs[pick];
      }
      std::size_t fresh = static_cast<std::size_t>(rng() % offsets.size());
      double scale = 1.0 / std::sqrt(probs[pick]);
      Vec out = Vec::Zero(dim);
      for (Index base = 0; base < dim; ++base) {
        auto ub = static_cast<std::uint64_t>(base);
        if (ub & mask) continue;
        out(static_cast<Index>(ub | offsets[fresh])) =
            scale * psi(static_cast<Index>(ub | offsets[pick]));
      }
      psi = std::move(out);
      return;
    }
    case ResamplerKind::kCustomCpt: {
      double u = uniform01(rng);
      Vec last;
      for (const Mat& a : r.kraus) {
        Vec phi = a * psi;
        double p = phi.squaredNorm();
        last = phi;
        if (u < p && p > 0.0) {
          psi = phi / std::sqrt(p);
          return;
        }
        u -= p;
      }
      if (last.squaredNorm() > 0.0) psi = last / last.norm();
      return;
    }
  }
}

SampledOutcome apply_sampled(const Instrument& inst, Vec& psi, Rng& rng) {
  SampledOutcome out;
  const double u = uniform01(rng);
  double acc = 0.0;
  for (const Mat& a : inst.success) {
    Vec phi = apply_local(a, inst.support, inst.num_qubits, psi);
    double p = phi.squaredNorm();
    acc += p;
    if (u < acc && p > 0.0) {
      psi = phi / std::sqrt(p);
      out.bit = 0;
      return out;
    }
  }
  out.bit = 1;
  // Failure branch: pick a Kraus operator in proportion to its weight.
  std::vector<Vec> branches;
  std::vector<double> weights;
  double total = 0.0;
  for (const Mat& a : inst.failure) {
    branches.push_back(apply_local(a, inst.support, inst.num_qubits, psi));
    weights.push_back(branches.back().squaredNorm());
    total += weights.back();
  }
  if (total < 1e-15) {
    out.degenerate_failure = true;
  } else {
    double v = uniform01(rng) * total;
    std::size_t pick = 0;
    for (; pick + 1 < weights.size(); ++pick) {
      if (v < weights[pick]) break;
      v -= weights[pick];
    }
    psi = branches[pick] / std::sqrt(weights[pick]);
  }
  resample(inst.resampler, inst.num_qubits, psi, rng);
  return out;
}

Eigen::RowVectorXcd trace_row(Index dim) {
  return vec(dqe::identity(dim)).transpose();
}

bool is_trace_preserving(const Mat& transfer, Index dim, double tol) {
  Eigen::RowVectorXcd one = trace_row(dim);
  return (one * transfer - one).cwiseAbs().maxCoeff() <= tol;
}

TransferMatrix transfer_of_kraus(const std::vector<Mat>& ops) {
  if (ops.empty()) fail(ErrorKind::kParameter, "empty Kraus list");
  const Index dim = ops.front().rows();
  require_transfer_dim(dim);
  TransferMatrix t;
  t.dim = dim;
  t.matrix = Mat::Zero(dim * dim, dim * dim);
  for (const Mat& a : ops) t.matrix += kron(a.conjugate(), a);
  t.trace_preserving = is_trace_preserving(t.matrix, dim);
  return t;
}

TransferMatrix transfer_of_local_kraus(const std::vector<Mat>& ops,
                                       const std::vector<int>& support,
                                       int num_qubits) {
  require_transfer_dim(Index{1} << num_qubits);
  std::vector<Mat> full;
  full.reserve(ops.size());
  for (const Mat& a : ops) full.push_back(embed(a, support, num_qubits));
  return transfer_of_kraus(full);
}

TransferMatrix transfer_of_resampler(const Resampler& r, int num_qubits) {
  const Index dim = Index{1} << num_qubits;
  require_transfer_dim(dim);
  switch (r.kind) {
    case ResamplerKind::kIdentity: {
      TransferMatrix t;
      t.dim = dim;
      t.matrix = dqe::identity(dim * dim);
      t.trace_preserving = true;
      return t;
    }
    case ResamplerKind::kGlobalMaximallyMixed: {
      TransferMatrix t;
      t.dim = dim;
      t.matrix = vec(dqe::identity(dim) / double(dim)) * trace_row(dim);
      t.trace_preserving = true;
      return t;
    }
    case ResamplerKind::kLocalMaximallyMixed: {
      // Kraus |a><b| / sqrt(2^k) on the replaced qubits.
      const Index loc = Index{1} << r.qubits.size();
      std::vector<Mat> ops;
      for (Index a = 0; a < loc; ++a) {
        for (Index b = 0; b < loc; ++b) {
          Mat op = Mat::Zero(loc, loc);
          op(a, b) = 1.0 / std::sqrt(double(loc));
          ops.push_back(std::move(op));
        }
      }
      return transfer_of_local_kraus(ops, r.qubits, num_qubits);
    }
    case ResamplerKind::kCustomCpt:
      return transfer_of_kraus(r.kraus);
  }
  fail(ErrorKind::kParameter, "unknown resampler");
}

TransferMatrix transfer_of_instrument_success(const Instrument& inst) {
  return transfer_of_local_kraus(inst.success, inst.support, inst.num_qubits);
}

TransferMatrix transfer_of_instrument_failure(const Instrument& inst) {
  TransferMatrix t;
  if (inst.resampler.kind == ResamplerKind::kGlobalMaximallyMixed) {
    TransferMatrix t0 = transfer_of_instrument_success(inst);
    const Index dim = t0.dim;
    t.dim = dim;
    t.matrix = vec(dqe::identity(dim) / double(dim)) *
               (trace_row(dim) * (dqe::identity(dim * dim) - t0.matrix));
  } else {
    TransferMatrix f =
        transfer_of_local_kraus(inst.failure, inst.support, inst.num_qubits);
    TransferMatrix r = transfer_of_resampler(inst.resampler, inst.num_qubits);
    t.dim = f.dim;
    t.matrix = r.matrix * f.matrix;
  }
  t.trace_preserving = is_trace_preserving(t.matrix, t.dim);
  return t;
}

Mat apply_transfer(const TransferMatrix& t, const Mat& rho) {
  return unvec(t.matrix * vec(rho), t.dim);
}

TransferMatrix cptp_transfer(const Mat& k) {
  const Index dim = k.rows();
  require_transfer_dim(dim);
  Mat t0 = kron(k.conjugate(), k);
  TransferMatrix t;
  t.dim = dim;
  t.matrix = t0 + vec(dqe::identity(dim) / double(dim)) *
                      (trace_row(dim) * (dqe::identity(dim * dim) - t0));
  t.trace_preserving = is_trace_preserving(t.matrix, dim);
  return t;
}

Mat fixed_point_direct(const Mat& k) {
  double norm = spectral_norm(k);
  if (norm >= 1.0 - 1e-8) {
    fail(ErrorKind::kSingularFixedPoint,
         "fixed point needs |K| < 1 - 1e-8, got |K| = " + std::to_string(norm));
  }
  const Index dim = k.rows();
  Mat a = dqe::identity(dim) - k * k.adjoint();
  Mat rho = hermitian_part(a.partialPivLu().solve(dqe::identity(dim)));
  return rho / rho.trace().real();
}

Mat fixed_point_iterate(const TransferMatrix& t, double tol, int max_iters,
                        const Mat* start) {
  if (!is_trace_preserving(t.matrix, t.dim)) {
    fail(ErrorKind::kParameter, "power iteration needs a trace-preserving map");
  }
  const Index dim = t.dim;
  Vec v = start != nullptr ? vec(*start) : vec(dqe::identity(dim) / double(dim));
  double residual = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vec next = t.matrix * v;
    next /= unvec(next, dim).trace();
    residual = trace_distance(unvec(next, dim), unvec(v, dim));
    v = std::move(next);
    if (residual < tol) return hermitian_part(unvec(v, dim));
  }
  throw ConvergenceError("power iteration did not converge", residual);
}

Mat fixed_point_solve(const TransferMatrix& t) {
  const Index dim = t.dim;
  const Index d2 = dim * dim;
  Mat a = t.matrix - dqe::identity(d2);
  a.row(0) = trace_row(dim);
  Vec rhs = Vec::Zero(d2);
  rhs(0) = 1.0;
  Eigen::PartialPivLU<Mat> lu(a);
  Vec sol = lu.solve(rhs);
  Mat rho = hermitian_part(unvec(sol, dim));
  return rho / rho.trace().real();
}

}  // namespace dqe
