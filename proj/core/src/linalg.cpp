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

#include "dqe/linalg.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "dqe/errors.hpp"

namespace dqe {

namespace {

int env_limit(const char* name, int fallback) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  long value = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || value < 1 || value > 30) {
    fail(ErrorKind::kConfig,
         std::string(name) + " must be an integer in [1, 30], got '" + raw +
             "'");
  }
  return static_cast<int>(value);
}

}  // namespace

int dense_qubit_limit() {
  return env_limit("DQE_DENSE_LIMIT", kDefaultDenseLimit);
}

int transfer_qubit_limit() {
  return env_limit("DQE_TRANSFER_LIMIT", kDefaultTransferLimit);
}

void require_dense(int num_qubits) {
  if (num_qubits > dense_qubit_limit()) {
    fail(ErrorKind::kResourceLimit,
         std::to_string(num_qubits) + " qubits exceeds the dense limit of " +
             std::to_string(dense_qubit_limit()) +
             " (set DQE_DENSE_LIMIT to raise it)");
  }
}

void require_transfer_dim(Index dim) {
  Index cap = Index{1} << transfer_qubit_limit();
  if (dim > cap) {
    fail(ErrorKind::kResourceLimit,
         "transfer matrix for dimension " + std::to_string(dim) +
             " exceeds the limit of " + std::to_string(transfer_qubit_limit()) +
             " qubits (set DQE_TRANSFER_LIMIT to raise it)");
  }
}

Vec vec(const Mat& rho) {
  return Eigen::Map<const Vec>(rho.data(), rho.size());
}

Mat unvec(const Vec& v, Index dim) {
  return Eigen::Map<const Mat>(v.data(), dim, dim);
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Mat identity(Index dim) { return Mat::Identity(dim, dim); }

Mat hermitian_part(const Mat& a) { return 0.5 * (a + a.adjoint()); }

double spectral_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<Mat> svd(a);
  return svd.singularValues()(0);
}

double trace_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<Mat> svd(a);
  return svd.singularValues().sum();
}

double trace_distance(const Mat& a, const Mat& b) {
  Mat diff = hermitian_part(a - b);
  Eigen::SelfAdjointEigenSolver<Mat> es(diff, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Mat sqrtm_psd(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(a));
  RVec roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
}

Mat matrix_power(const Mat& a, std::uint64_t p) {
  Mat result = identity(a.rows());
  Mat base = a;
  while (p > 0) {
    if (p & 1U) result = result * base;
    p >>= 1U;
    if (p > 0) base = base * base;
  }
  return result;
}

namespace {

struct LocalLayout {
  std::vector<Index> offsets;  // full-index offset of each local pattern
  Index mask = 0;              // bits owned by the support
};

LocalLayout layout_for(const std::vector<int>& qubits, int num_qubits) {
  LocalLayout layout;
  const std::size_t k = qubits.size();
  layout.offsets.assign(std::size_t{1} << k, 0);
  for (std::size_t l = 0; l < layout.offsets.size(); ++l) {
    Index off = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if ((l >> (k - 1 - j)) & 1U) {
        off |= Index{1} << bit_of(qubits[j], num_qubits);
      }
    }
    layout.offsets[l] = off;
  }
  for (int q : qubits) layout.mask |= Index{1} << bit_of(q, num_qubits);
  return layout;
}

void check_local(const Mat& local, const std::vector<int>& qubits,
                 int num_qubits) {
  Index expect = Index{1} << qubits.size();
  if (local.rows() != expect || local.cols() != expect) {
    fail(ErrorKind::kParameter, "local operator size does not match support");
  }
  for (int q : qubits) {
    if (q < 0 || q >= num_qubits) {
      fail(ErrorKind::kParameter, "support qubit out of range");
    }
  }
}

}  // namespace

Mat embed(const Mat& local, const std::vector<int>& qubits, int num_qubits) {
  check_local(local, qubits, num_qubits);
  const Index dim = Index{1} << num_qubits;
  LocalLayout layout = layout_for(qubits, num_qubits);
  Mat out = Mat::Zero(dim, dim);
  const Index loc = static_cast<Index>(layout.offsets.size());
  for (Index base = 0; base < dim; ++base) {
    if (base & layout.mask) continue;
    for (Index r = 0; r < loc; ++r) {
      for (Index c = 0; c < loc; ++c) {
        out(base | layout.offsets[r], base | layout.offsets[c]) = local(r, c);
      }
    }
  }
  return out;
}

Vec apply_local(const Mat& local, const std::vector<int>& qubits,
                int num_qubits, const Vec& psi) {
  check_local(local, qubits, num_qubits);
  const Index dim = Index{1} << num_qubits;
  LocalLayout layout = layout_for(qubits, num_qubits);
  const Index loc = static_cast<Index>(layout.offsets.size());
  const Index* off = layout.offsets.data();
  Vec out(dim);
  std::vector<cplx> in_local(static_cast<std::size_t>(loc));
  for (Index base = 0; base < dim; ++base) {
    if (base & layout.mask) continue;
    for (Index l = 0; l < loc; ++l) in_local[l] = psi(base | off[l]);
    for (Index r = 0; r < loc; ++r) {
      cplx acc = 0.0;
      for (Index c = 0; c < loc; ++c) acc += local(r, c) * in_local[c];
      out(base | off[r]) = acc;
    }
  }
  return out;
}

Mat apply_local_left(const Mat& local, const std::vector<int>& qubits,
                     int num_qubits, const Mat& m) {
  check_local(local, qubits, num_qubits);
  if (m.rows() != (Index{1} << num_qubits)) {
    fail(ErrorKind::kParameter, "matrix rows do not match the register");
  }
  LocalLayout layout = layout_for(qubits, num_qubits);
  const auto loc = static_cast<Index>(layout.offsets.size());
  std::vector<Index> rows(static_cast<std::size_t>(loc));
  Mat out(m.rows(), m.cols());
  Mat block(loc, m.cols());
  for (Index base = 0; base < m.rows(); ++base) {
    if (base & layout.mask) continue;
    for (Index l = 0; l < loc; ++l) rows[l] = base | layout.offsets[l];
    block.noalias() = local * m(rows, Eigen::all);
    out(rows, Eigen::all) = block;
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finalizer over a combined key.
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Vec random_state(Index dim, Rng& rng) {
  std::normal_distribution<double> gauss;
  Vec v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = cplx(gauss(rng), gauss(rng));
  return v / v.norm();
}

Mat random_density(Index dim, Rng& rng) {
  std::normal_distribution<double> gauss;
  Mat g(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    for (Index j = 0; j < dim; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
  }
  Mat rho = g * g.adjoint();
  return rho / rho.trace().real();
}

Mat random_unitary(Index dim, Rng& rng) {
  std::normal_distribution<double> gauss;
  Mat g(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    for (Index j = 0; j < dim; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
  }
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < dim; ++i) {
    cplx d = r(i, i);
    q.col(i) *= (std::abs(d) > 0 ? d / std::abs(d) : cplx(1.0));
  }
  return q;
}

Mat random_hermitian(Index dim, Rng& rng) {
  std::normal_distribution<double> gauss;
  Mat g(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    for (Index j = 0; j < dim; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
  }
  return hermitian_part(g);
}

}  // namespace dqe
