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

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace dqe {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Index = Eigen::Index;
using Rng = std::mt19937_64;

/// Default qubit cap for dense D x D operators. Overridden by DQE_DENSE_LIMIT.
inline constexpr int kDefaultDenseLimit = 12;
/// Default qubit cap for D^2 x D^2 transfer matrices. Overridden by
/// DQE_TRANSFER_LIMIT.
inline constexpr int kDefaultTransferLimit = 6;

int dense_qubit_limit();
int transfer_qubit_limit();
/// Throws a resource-limit error when n exceeds the dense cap.
void require_dense(int num_qubits);
/// Throws a resource-limit error when a D x D system is too large for
/// transfer matrices.
void require_transfer_dim(Index dim);

/// Bit position of qubit q in a basis index. Qubit 0 is the most significant
/// tensor factor.
inline int bit_of(int qubit, int num_qubits) { return num_qubits - 1 - qubit; }

/// Column-stacking vectorization.
Vec vec(const Mat& rho);
Mat unvec(const Vec& v, Index dim);

Mat kron(const Mat& a, const Mat& b);
Mat identity(Index dim);
Mat hermitian_part(const Mat& a);
double spectral_norm(const Mat& a);
double trace_norm(const Mat& a);
double trace_distance(const Mat& a, const Mat& b);
/// Principal square root of a Hermitian positive semidefinite matrix.
/// Small negative eigenvalues from rounding are clamped to zero.
Mat sqrtm_psd(const Mat& a);
/// a^p by binary exponentiation.
Mat matrix_power(const Mat& a, std::uint64_t p);

/// Lift a 2^k x 2^k operator on `qubits` to the full n-qubit space. The first
/// listed qubit is the most significant local factor.
Mat embed(const Mat& local, const std::vector<int>& qubits, int num_qubits);
/// op|psi> for a local operator, without forming the full matrix.
Vec apply_local(const Mat& local, const std::vector<int>& qubits,
                int num_qubits, const Vec& psi);
/// op * M for a local operator acting on the row index of M.
Mat apply_local_left(const Mat& local, const std::vector<int>& qubits,
                     int num_qubits, const Mat& m);

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
/// Stream seed for item `index` under `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

Vec random_state(Index dim, Rng& rng);
Mat random_density(Index dim, Rng& rng);
Mat random_unitary(Index dim, Rng& rng);
Mat random_hermitian(Index dim, Rng& rng);

}  // namespace dqe
