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

#include <string>
#include <vector>

#include "dqe/linalg.hpp"
#include "dqe/pauli.hpp"

namespace dqe {

/// Per-term weight in the weak measurement (1-eps) 1 + eps w_v k_v.
enum class Weighting {
  kNormalized,  ///< w_v = |alpha_v| / kappa
  kUnit,        ///< w_v = 1
};

Weighting parse_weighting(const std::string& name);
const char* to_string(Weighting w);

/// (Delta, Gamma, eps). Delta and Gamma are stored squared, as in the
/// definition; the operator bounds are their square roots.
struct AgspParams {
  double delta = 0.0;
  double gamma = 1.0;
  double epsilon = 0.0;

  double sqrt_delta() const;
  double sqrt_gamma() const;
  static AgspParams from_roots(double sqrt_delta, double sqrt_gamma,
                               double epsilon);
};

/// One local factor k_v with its weight and support.
struct LocalFactor {
  double weight = 1.0;
  Mat factor;  ///< 2^k x 2^k projector on the support
  std::vector<int> support;
};

enum class ParamSource { kNone, kClaimed, kMeasured };

struct Agsp {
  std::string kind;
  int num_qubits = 0;
  Mat op;
  AgspParams params;
  ParamSource source = ParamSource::kNone;
  std::vector<LocalFactor> local_factors;
  /// Chebyshev only: bound on the number of local terms of the polynomial.
  double term_count_estimate = 0.0;
};

/// k_v = (1 - s_v h_v)/2 and its weight for every term.
std::vector<LocalFactor> pauli_factors(const PauliHamiltonian& h,
                                       Weighting weighting);

/// K = (1 - H/kappa)/2.
Agsp agsp_linear(const PauliHamiltonian& h, const SpectralData& spectral);

/// K' = E_1 ... E_m E_m ... E_1 with E_i = (1-eps) 1 + eps w_i k_i.
/// Claimed parameters are the first-order forms and are filled only when
/// `spectral` is given and the weighted factors sum to a multiple of the
/// linear AGSP.
Agsp agsp_product(const PauliHamiltonian& h, double eps,
                  Weighting weighting = Weighting::kNormalized,
                  const SpectralData* spectral = nullptr);

/// Degree-ell Chebyshev filter over [lambda1, |H|], normalised to 1 at
/// lambda0. `num_terms` (m) only feeds the term-count estimate (e m / ell)^ell.
Agsp agsp_chebyshev(const SpectralData& spectral, int ell, int num_terms = 0);
/// The filter value at x.
double chebyshev_filter(const SpectralData& spectral, int ell, double x);
/// 2 exp(-2 ell sqrt(gap / (|H| - lambda0))).
double chebyshev_sqrt_delta_bound(const SpectralData& spectral, int ell);

struct AgspVerification {
  AgspParams params;
  Mat projector;  ///< rank-N spectral projector of K matched to pi0
};

/// Measures (Delta, Gamma, eps) of a Hermitian K against pi0.
AgspVerification verify_agsp_full(const Mat& k, const Mat& pi0);
AgspParams verify_agsp(const Mat& k, const Mat& pi0);

/// E_i = ((1-eps) 1 + eps w_i k_i) / sqrt(m), dense.
std::vector<Mat> mixture_kraus(const PauliHamiltonian& h, double eps,
                               Weighting weighting = Weighting::kNormalized);

}  // namespace dqe
