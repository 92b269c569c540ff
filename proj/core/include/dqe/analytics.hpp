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

#include <cstdint>

#include "dqe/agsp.hpp"
#include "dqe/instrument.hpp"
#include "dqe/pauli.hpp"
#include "dqe/trajectory.hpp"

namespace dqe {

/// A bound together with a flag telling whether its hypotheses failed.
struct BoundValue {
  double value = 0.0;
  bool vacuous = false;
};

// ---------------------------------------------------------------------------
// Global resampling, maximally mixed start: closed forms in the spectrum of K.

/// E(rho_n) = K^{2n} / tr K^{2n}. Evaluated through the eigenvalues of K in
/// log space, so large n does not underflow.
Mat expected_state_global(const Mat& k, std::int64_t n);

/// tr(pi0 E(rho_n)).
double expected_overlap_global(const Mat& k, const Mat& pi0, std::int64_t n);

/// E(tau_n) = tr(sum_{j<n} K^{2j}) / tr K^{2n}.
double expected_tau_global(const Mat& k, std::int64_t n);

/// (1/Gamma^n)(n + (1 - Delta^n)/(1 - Delta) (D/N - 1)).
double expected_tau_bound(const AgspParams& params, double dim,
                          double degeneracy, std::int64_t n);

/// clamp(1 - eps - (D/N)(Delta/Gamma)^n, 0, 1); vacuous when Gamma <= Delta.
BoundValue overlap_lower_bound(const AgspParams& params, double dim,
                               double degeneracy, std::int64_t n);

/// Smallest n with (D/N)(Delta/Gamma)^n <= target_error.
std::int64_t depth_estimate(const AgspParams& params, double dim,
                            double degeneracy, double target_error);

/// (1 - Delta)/((Gamma - Delta) + (D/N)(1 - Gamma)) - eps.
double fixed_point_overlap_bound(const AgspParams& params, double dim,
                                 double degeneracy);

/// Chebyshev AGSP of degree ell scaled by (1 - N/D) so that the fixed point
/// of the resampling channel exists.
Mat chebyshev_fixed_point_operator(const SpectralData& spectral, int ell);

/// 1 - (N/D)(D/N - 1) / (1 - 4 exp(-4 ell sqrt(delta/(|H| - lambda0)))).
/// Vacuous when the denominator is not positive.
BoundValue chebyshev_fixed_point_bound(const SpectralData& spectral, int ell);

// ---------------------------------------------------------------------------
// Arbitrary resampling: transfer-matrix formulas.

struct GeneralExpectation {
  Mat state;          ///< E(rho_n)
  double tau = 0.0;   ///< E(tau_n)
  double rcond = 0.0; ///< reciprocal condition estimate of the solved matrix
};

/// Throws IllConditionedError if the state reached right after a failure
/// from rho0 has no chance of producing a 0 outcome.
void check_resampling_condition(const TransferMatrix& e0,
                                const TransferMatrix& e1, const Mat& rho0);

/// E|rho_n>> = E0^n W^{-1}|rho0>> with W = 1 - E1 sum_{j<n} E0^j, and
/// E(tau_n) = n<<1|E0^n x>> + <<1|E0^n W^{-1} E1 sum_{j<n}(j+1)E0^j x>>,
/// x = W^{-1}|rho0>>. One LU factorization of W serves both.
GeneralExpectation expected_general(const TransferMatrix& e0,
                                    const TransferMatrix& e1, const Mat& rho0,
                                    std::int64_t n);
Mat expected_state_general(const TransferMatrix& e0, const TransferMatrix& e1,
                           const Mat& rho0, std::int64_t n);
double expected_tau_general(const TransferMatrix& e0, const TransferMatrix& e1,
                            const Mat& rho0, std::int64_t n);

/// Same quantities through LU solves on A = 1 - E0 - E1 + E1 E0^n and
/// (1 - E0). Singular whenever E0 has eigenvalue 1.
GeneralExpectation expected_general_factored(const TransferMatrix& e0,
                                             const TransferMatrix& e1,
                                             const Mat& rho0, std::int64_t n);

/// max |<<1| E0^n W^{-1} - <<1||.
double stopped_map_trace_defect(const TransferMatrix& e0,
                                const TransferMatrix& e1, std::int64_t n);
/// max |<<1| E1 (1 - E0)^{-1} - <<1||.
double failure_map_trace_defect(const TransferMatrix& e0,
                                const TransferMatrix& e1);
/// <<1| E0^n W^{-1} E1 (1 - E0)^{-1} E0^n W^{-1} |rho0>>, which equals 1.
double sequence_probability(const TransferMatrix& e0, const TransferMatrix& e1,
                            const Mat& rho0, std::int64_t n);

// ---------------------------------------------------------------------------
// Sweep-level instruments matching run_trajectory.

struct SweepTransfer {
  TransferMatrix e0;  ///< every measurement in the sweep succeeded
  TransferMatrix e1;  ///< some measurement failed, state resampled
};

/// Transfer matrices of one recorded step of run_trajectory for the given
/// mode. A sweep ends at its first failure. `micro_steps` is the number of
/// mixture draws per step (0 means 2m).
SweepTransfer sweep_transfer(const PauliHamiltonian& h, AgspMode mode,
                             double eps, Weighting weighting,
                             ResamplingScope scope, int micro_steps = 0);

/// Same for explicit per-term instruments (product or mixture mode).
SweepTransfer sweep_transfer_of(const TermInstruments& terms, AgspMode mode,
                                int micro_steps = 0);

/// Product-sweep, global resampling, eps_j = eps / j on the j-th step of a
/// run: E(rho_n) is proportional to M M^dag with M = K'(eps/n) ... K'(eps/1).
Mat expected_state_decaying(const PauliHamiltonian& h, double eps,
                            Weighting weighting, std::int64_t n);

}  // namespace dqe
