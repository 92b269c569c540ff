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

#include "dqe/agsp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dqe/errors.hpp"

namespace dqe {

Weighting parse_weighting(const std::string& name) {
  if (name == "normalized") return Weighting::kNormalized;
  if (name == "unit") return Weighting::kUnit;
  fail(ErrorKind::kConfig,
       "weighting must be 'normalized' or 'unit', got '" + name + "'");
}

const char* to_string(Weighting w) {
  return w == Weighting::kNormalized ? "normalized" : "unit";
}

double AgspParams::sqrt_delta() const { return std::sqrt(delta); }
double AgspParams::sqrt_gamma() const { return std::sqrt(gamma); }

AgspParams AgspParams::from_roots(double sqrt_delta, double sqrt_gamma,
                                  double epsilon) {
  return {sqrt_delta * sqrt_delta, sqrt_gamma * sqrt_gamma, epsilon};
}

namespace {

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    fail(ErrorKind::kParameter,
         "weak-measurement strength must lie in (0, 1), got " +
             std::to_string(eps));
  }
}

}  // namespace

std::vector<LocalFactor> pauli_factors(const PauliHamiltonian& h,
                                       Weighting weighting) {
  std::vector<LocalFactor> out;
  out.reserve(h.num_terms());
  for (const PauliTerm& t : h.terms()) {
    LocalFactor f;
    f.support = t.string.support();
    Mat hv = t.string.local_matrix();
    f.factor = 0.5 * (identity(hv.rows()) - t.sign() * hv);
    f.weight = weighting == Weighting::kNormalized
                   ? std::abs(t.coefficient) / h.kappa()
                   : 1.0;
    out.push_back(std::move(f));
  }
  return out;
}

Agsp agsp_linear(const PauliHamiltonian& h, const SpectralData& spectral) {
  if (h.kappa() == 0.0) {
    fail(ErrorKind::kDegenerateInstance, "linear AGSP needs kappa > 0");
  }
  Agsp a;
  a.kind = "linear";
  a.num_qubits = h.num_qubits();
  a.op = 0.5 * (identity(h.dimension()) - to_dense(h) / h.kappa());
  a.local_factors = pauli_factors(h, Weighting::kNormalized);
  a.params = AgspParams::from_roots(0.5 * (1.0 - spectral.lambda1 / h.kappa()),
                                    0.5 * (1.0 - spectral.lambda0 / h.kappa()),
                                    0.0);
  a.source = ParamSource::kClaimed;
  return a;
}

Agsp agsp_product(const PauliHamiltonian& h, double eps, Weighting weighting,
                  const SpectralData* spectral) {
  check_eps(eps);
  Agsp a;
  a.kind = "product";
  a.num_qubits = h.num_qubits();
  a.local_factors = pauli_factors(h, weighting);
  const int n = h.num_qubits();
  Mat k = identity(h.dimension());
  auto apply_factor = [&](const LocalFactor& f) {
    Mat e = (1.0 - eps) * identity(f.factor.rows()) + eps * f.weight * f.factor;
    k = apply_local_left(e, f.support, n, k);
  };
  for (const LocalFactor& f : a.local_factors) apply_factor(f);
  for (auto it = a.local_factors.rbegin(); it != a.local_factors.rend(); ++it) {
    apply_factor(*it);
  }
  a.op = hermitian_part(k);

  // First order: K' ~ (1-eps)^{2m} + 2 eps (1-eps)^{2m-1} c K_lin, with c = 1
  // for normalized weights and c = m for unit weights on uniform |alpha|.
  if (spectral != nullptr && h.num_terms() > 0) {
    double c = 1.0;
    bool linear_multiple = weighting == Weighting::kNormalized;
    if (weighting == Weighting::kUnit) {
      double a0 = std::abs(h.terms().front().coefficient);
      linear_multiple = std::all_of(
          h.terms().begin(), h.terms().end(), [&](const PauliTerm& t) {
            return std::abs(std::abs(t.coefficient) - a0) <= 1e-12 * a0;
          });
      c = static_cast<double>(h.num_terms());
    }
    if (linear_multiple) {
      const double m = static_cast<double>(h.num_terms());
      const double lead = std::pow(1.0 - eps, 2.0 * m - 1.0);
      auto root = [&](double lambda) {
        double lin = 0.5 * (1.0 - lambda / h.kappa());
        return lead * ((1.0 - eps) + 2.0 * eps * c * lin);
      };
      a.params = AgspParams::from_roots(root(spectral->lambda1),
                                        root(spectral->lambda0), 0.0);
      a.source = ParamSource::kClaimed;
    }
  }
  return a;
}

namespace {

double chebyshev_t(int ell, double x) {
  if (std::abs(x) <= 1.0) return std::cos(ell * std::acos(x));
  double v = std::cosh(ell * std::acosh(std::abs(x)));
  return (x < 0.0 && (ell % 2 == 1)) ? -v : v;
}

void check_chebyshev(const SpectralData& spectral, int ell) {
  if (ell < 1) fail(ErrorKind::kParameter, "Chebyshev degree must be >= 1");
  if (spectral.gap <= degeneracy_tolerance(spectral.norm)) {
    fail(ErrorKind::kDegenerateInstance,
         "Chebyshev AGSP needs a spectral gap above the degeneracy tolerance");
  }
}

bool collapsed_window(const SpectralData& spectral) {
  return spectral.norm - spectral.lambda1 <=
         degeneracy_tolerance(spectral.norm);
}

}  // namespace

double chebyshev_filter(const SpectralData& spectral, int ell, double x) {
  check_chebyshev(spectral, ell);
  const double tol = degeneracy_tolerance(spectral.norm);
  if (collapsed_window(spectral)) {
    // Zero-width suppression window: the filter tends to the ground
    // indicator.
    return x < spectral.lambda0 + tol ? 1.0 : 0.0;
  }
  const double width = spectral.norm - spectral.lambda1;
  auto map = [&](double y) {
    return (2.0 * y - spectral.lambda1 - spectral.norm) / width;
  };
  return chebyshev_t(ell, map(x)) / chebyshev_t(ell, map(spectral.lambda0));
}

double chebyshev_sqrt_delta_bound(const SpectralData& spectral, int ell) {
  return 2.0 * std::exp(-2.0 * ell *
                        std::sqrt(spectral.gap /
                                  (spectral.norm - spectral.lambda0)));
}

Agsp agsp_chebyshev(const SpectralData& spectral, int ell, int num_terms) {
  check_chebyshev(spectral, ell);
  const Index dim = spectral.dimension;
  RVec filtered(dim);
  for (Index i = 0; i < dim; ++i) {
    filtered(i) = chebyshev_filter(spectral, ell, spectral.eigenvalues(i));
  }
  Agsp a;
  a.kind = "chebyshev";
  a.num_qubits = static_cast<int>(std::lround(std::log2(double(dim))));
  a.op = hermitian_part(spectral.eigenvectors * filtered.asDiagonal() *
                        spectral.eigenvectors.adjoint());
  if (num_terms > 0) {
    a.term_count_estimate =
        std::pow(std::exp(1.0) * num_terms / static_cast<double>(ell), ell);
  }
  a.params = AgspParams::from_roots(chebyshev_sqrt_delta_bound(spectral, ell),
                                    1.0, 0.0);
  a.source = ParamSource::kClaimed;
  return a;
}

AgspVerification verify_agsp_full(const Mat& k, const Mat& pi0) {
  if ((k - k.adjoint()).norm() > 1e-9 * std::max(1.0, k.norm())) {
    fail(ErrorKind::kInvalidAgsp, "AGSP operator is not Hermitian");
  }
  const Index dim = k.rows();
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(k));
  const RVec& vals = es.eigenvalues();
  const Mat& vecs = es.eigenvectors();
  const auto rank = static_cast<Index>(std::lround(pi0.trace().real()));

  std::vector<Index> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), Index{0});
  RVec overlap(dim);
  for (Index i = 0; i < dim; ++i) {
    overlap(i) = (vecs.col(i).adjoint() * pi0 * vecs.col(i))(0, 0).real();
  }
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (std::abs(overlap(a) - overlap(b)) > 1e-9) return overlap(a) > overlap(b);
    return vals(a) > vals(b);
  });

  Mat proj = Mat::Zero(dim, dim);
  double sqrt_gamma = std::numeric_limits<double>::infinity();
  for (Index r = 0; r < rank; ++r) {
    Index i = order[static_cast<std::size_t>(r)];
    proj += vecs.col(i) * vecs.col(i).adjoint();
    sqrt_gamma = std::min(sqrt_gamma, vals(i));
  }
  double sqrt_delta = 0.0;
  for (Index r = rank; r < dim; ++r) {
    Index i = order[static_cast<std::size_t>(r)];
    sqrt_delta = std::max(sqrt_delta, std::abs(vals(i)));
  }
  if (rank == 0) sqrt_gamma = 1.0;
  Mat diff = hermitian_part(proj - pi0);
  Eigen::SelfAdjointEigenSolver<Mat> ds(diff, Eigen::EigenvaluesOnly);
  double eps = ds.eigenvalues().cwiseAbs().maxCoeff();

  AgspVerification out;
  out.params.delta = sqrt_delta * sqrt_delta;
  out.params.gamma = std::max(0.0, sqrt_gamma) * std::max(0.0, sqrt_gamma);
  out.params.epsilon = eps;
  out.projector = proj;
  return out;
}

AgspParams verify_agsp(const Mat& k, const Mat& pi0) {
  return verify_agsp_full(k, pi0).params;
}

std::vector<Mat> mixture_kraus(const PauliHamiltonian& h, double eps,
                               Weighting weighting) {
  check_eps(eps);
  std::vector<Mat> out;
  const double scale = 1.0 / std::sqrt(static_cast<double>(h.num_terms()));
  for (const LocalFactor& f : pauli_factors(h, weighting)) {
    Mat e = (1.0 - eps) * identity(f.factor.rows()) + eps * f.weight * f.factor;
    out.push_back(scale * embed(e, f.support, h.num_qubits()));
  }
  return out;
}

}  // namespace dqe
