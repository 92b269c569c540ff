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

#include <vector>

#include "dqe/agsp.hpp"
#include "dqe/linalg.hpp"

namespace dqe {

enum class ResamplerKind {
  kGlobalMaximallyMixed,
  kLocalMaximallyMixed,
  kIdentity,
  kCustomCpt,
};

/// Recovery map applied after a failure outcome.
struct Resampler {
  ResamplerKind kind = ResamplerKind::kGlobalMaximallyMixed;
  std::vector<int> qubits;  ///< replaced qubits (local kind)
  std::vector<Mat> kraus;   ///< full-space Kraus operators (custom kind)
  /// Guaranteed minimum eigenvalue of any output state.
  double min_support = 0.0;

  static Resampler global(int num_qubits);
  static Resampler local(std::vector<int> qubits);
  static Resampler identity();
  /// Validates completeness within 1e-10. `min_support` is the declared mu.
  static Resampler custom(std::vector<Mat> kraus, double min_support);
};

/// Two-outcome instrument. Success and failure branches are Kraus lists on
/// `support`; the ideal weak measurement has one operator per branch.
struct Instrument {
  int num_qubits = 0;
  std::vector<int> support;
  std::vector<Mat> success;
  std::vector<Mat> failure;
  Resampler resampler;

  const Mat& e0() const { return success.front(); }
  const Mat& e1() const { return failure.front(); }
  /// Sum of A^dag A over both branches minus identity, in operator norm.
  double completeness_defect() const;
};

/// E1 = sqrt(1 - E0^dag E0). Throws invalid-agsp when |E0| > 1.
Instrument make_instrument(const Mat& e0, std::vector<int> support,
                           int num_qubits, Resampler resampler);
/// E0 = (1 - eps) 1 + eps w k for one local factor.
Instrument make_weak_instrument(const LocalFactor& factor, double eps,
                                int num_qubits, Resampler resampler);
/// Global instrument with E0 = K on every qubit.
Instrument make_global_instrument(const Mat& k, Resampler resampler);
/// Instrument from explicit Kraus lists. Completeness checked to 1e-8.
Instrument make_instrument_from_kraus(std::vector<Mat> success,
                                      std::vector<Mat> failure,
                                      std::vector<int> support, int num_qubits,
                                      Resampler resampler);

/// Pure-state unravelling of a resampler.
void resample(const Resampler& r, int num_qubits, Vec& psi, Rng& rng);

struct SampledOutcome {
  int bit = 0;
  /// Failure branch had vanishing norm and the state was resampled directly.
  bool degenerate_failure = false;
};

/// One measurement on a normalised pure state, in place.
SampledOutcome apply_sampled(const Instrument& inst, Vec& psi, Rng& rng);

/// D^2 x D^2 matrix of a CP map in the column-stacking convention.
struct TransferMatrix {
  Mat matrix;
  bool trace_preserving = false;
  Index dim = 0;
};

/// <<1| as a row vector for dimension `dim`.
Eigen::RowVectorXcd trace_row(Index dim);
bool is_trace_preserving(const Mat& transfer, Index dim, double tol = 1e-9);

/// sum_i conj(A_i) (x) A_i for full-space Kraus operators.
TransferMatrix transfer_of_kraus(const std::vector<Mat>& ops);
/// Local Kraus operators lifted to the full space first.
TransferMatrix transfer_of_local_kraus(const std::vector<Mat>& ops,
                                       const std::vector<int>& support,
                                       int num_qubits);
TransferMatrix transfer_of_resampler(const Resampler& r, int num_qubits);
TransferMatrix transfer_of_instrument_success(const Instrument& inst);
/// Resampler after the failure branch. For the global resampler this is
/// |1/D>><<1| (1 - E0).
TransferMatrix transfer_of_instrument_failure(const Instrument& inst);

Mat apply_transfer(const TransferMatrix& t, const Mat& rho);

/// rho -> K rho K^dag + (tr rho - tr K rho K^dag) 1/D.
TransferMatrix cptp_transfer(const Mat& k);

/// (1 - K^2)^{-1} normalised. Refuses |K| >= 1 - 1e-8.
Mat fixed_point_direct(const Mat& k);
/// Power iteration from 1/D (or `start`) until successive trace distance
/// drops below tol.
Mat fixed_point_iterate(const TransferMatrix& t, double tol = 1e-13,
                        int max_iters = 100000, const Mat* start = nullptr);
/// Fixed point by a linear solve with the trace constraint.
Mat fixed_point_solve(const TransferMatrix& t);

}  // namespace dqe
