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


#include <gtest/gtest.h>

#include <cmath>

#include "dqe/agsp.hpp"
#include "dqe/errors.hpp"
#include "dqe/linalg.hpp"
#include "dqe/pauli.hpp"

namespace dqe {
namespace {

PauliHamiltonian single_z() {
  return PauliHamiltonian(1, {{1.0, PauliString::parse("Z")}});
}

PauliHamiltonian maxsat_single() { return build_maxsat(2, {{{0, 1}, "11"}}); }

std::vector<PauliHamiltonian> test_systems() {
  return {single_z(), build_heisenberg_chain(2), build_heisenberg_chain(3),
          build_heisenberg_chain(4), maxsat_single(),
          build_maxsat(3, {{{0, 1}, "11"}, {{1, 2}, "10"}})};
}

/// Dense forward-then-reversed product built from full-space factors.
Mat product_oracle(const PauliHamiltonian& h, double eps, Weighting w) {
  const Index d = h.dimension();
  std::vector<Mat> factors;
  for (const PauliTerm& t : h.terms()) {
    Mat hv = to_dense(t.string);
    Mat kv = 0.5 * (Mat::Identity(d, d) - t.sign() * hv);
    double weight =
        w == Weighting::kNormalized ? std::abs(t.coefficient) / h.kappa() : 1.0;
    factors.push_back((1.0 - eps) * Mat::Identity(d, d) + eps * weight * kv);
  }
  Mat k = Mat::Identity(d, d);
  for (const Mat& f : factors) k = f * k;
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) k = *it * k;
  return k;
}

TEST(LinearAgsp, SingleZ) {
  PauliHamiltonian h = single_z();
  Agsp a = agsp_linear(h, diagonalize(h));
  Mat expect = Mat::Zero(2, 2);
  expect(1, 1) = 1.0;
  EXPECT_LT((a.op - expect).norm(), 1e-15);
  AgspParams p = verify_agsp(a.op, diagonalize(h).ground_projector);
  EXPECT_NEAR(p.sqrt_gamma(), 1.0, 1e-10);
  EXPECT_NEAR(p.sqrt_delta(), 0.0, 1e-10);
  EXPECT_NEAR(p.epsilon, 0.0, 1e-10);
}

TEST(LinearAgsp, HeisenbergTwo) {
  PauliHamiltonian h = build_heisenberg_chain(2);
  SpectralData s = diagonalize(h);
  AgspParams p = verify_agsp(agsp_linear(h, s).op, s.ground_projector);
  EXPECT_NEAR(p.sqrt_gamma(), 1.0, 1e-9);
  EXPECT_NEAR(p.sqrt_delta(), 1.0 / 3.0, 1e-9);
}

TEST(LinearAgsp, MaxSatSingleClause) {
  PauliHamiltonian h = maxsat_single();
  SpectralData s = diagonalize(h);
  AgspParams p = verify_agsp(agsp_linear(h, s).op, s.ground_projector);
  EXPECT_NEAR(p.sqrt_gamma(), 0.5, 1e-9);
  EXPECT_NEAR(p.sqrt_delta(), 0.0, 1e-9);
}

TEST(LinearAgsp, ZeroKappaIsDegenerate) {
  PauliHamiltonian h(1, {});
  try {
    agsp_linear(h, diagonalize(h));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerateInstance);
  }
}

TEST(LinearAgspProperty, MeasuredMatchesClaimed) {
  for (const PauliHamiltonian& h : test_systems()) {
    SpectralData s = diagonalize(h);
    Agsp a = agsp_linear(h, s);
    AgspParams m = verify_agsp(a.op, s.ground_projector);
    EXPECT_NEAR(m.sqrt_gamma(), (1.0 - s.lambda0 / h.kappa()) / 2.0, 1e-9);
    EXPECT_NEAR(m.sqrt_delta(), (1.0 - s.lambda1 / h.kappa()) / 2.0, 1e-9);
    for (const LocalFactor& f : a.local_factors) {
      EXPECT_LT((f.factor * f.factor - f.factor).norm(), 1e-10);
      EXPECT_LE(spectral_norm(f.factor), 1.0 + 1e-12);
    }
  }
}

TEST(ProductAgsp, SingleTermIsSquareOfFactor) {
  PauliHamiltonian h = single_z();
  const double eps = 0.3;
  Mat k = 0.5 * (Mat::Identity(2, 2) - to_dense(h));
  Mat f = (1.0 - eps) * Mat::Identity(2, 2) + eps * k;
  EXPECT_LT((agsp_product(h, eps).op - f * f).norm(), 1e-14);
}

TEST(ProductAgsp, MatchesDenseOracle) {
  for (Weighting w : {Weighting::kNormalized, Weighting::kUnit}) {
    for (const PauliHamiltonian& h : test_systems()) {
      Mat k = agsp_product(h, 0.17, w).op;
      EXPECT_LT((k - product_oracle(h, 0.17, w)).norm(), 1e-12);
      EXPECT_LT((k - k.adjoint()).norm(), 1e-12);
      EXPECT_LE(spectral_norm(k), 1.0 + 1e-12);
    }
  }
}

TEST(ProductAgsp, FirstOrderExpansionIsQuadraticallyAccurate) {
  PauliHamiltonian h = build_heisenberg_chain(2);
  SpectralData s = diagonalize(h);
  Mat klin = agsp_linear(h, s).op;
  const double m = static_cast<double>(h.num_terms());
  auto residual = [&](double eps) {
    Mat approx = std::pow(1.0 - eps, 2.0 * m) * Mat::Identity(4, 4) +
                 2.0 * eps * std::pow(1.0 - eps, 2.0 * m - 1.0) * klin;
    return spectral_norm(agsp_product(h, eps).op - approx);
  };
  const double r2 = residual(1e-2);
  const double r3 = residual(1e-3);
  EXPECT_GT(r2 / r3, 50.0);
  EXPECT_LT(r2, 10.0 * 1e-4);
}

TEST(ProductAgsp, SmallEpsilonTendsToIdentity) {
  Mat k = agsp_product(build_heisenberg_chain(3), 1e-9).op;
  EXPECT_LT(spectral_norm(k - Mat::Identity(8, 8)), 1e-7);
}

TEST(ProductAgsp, RejectsEpsilonOutsideOpenInterval) {
  for (double eps : {0.0, 1.0, -0.1, 1.5}) {
    try {
      agsp_product(build_heisenberg_chain(2), eps);
      FAIL() << eps;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kParameter);
    }
  }
}

TEST(ProductAgsp, ProjectorErrorIsSecondOrder) {
  PauliHamiltonian h = build_heisenberg_chain(2);
  SpectralData s = diagonalize(h);
  for (double eps : {1e-2, 1e-3}) {
    AgspParams p = verify_agsp(agsp_product(h, eps).op, s.ground_projector);
    EXPECT_LE(p.epsilon, eps * eps);
  }
}

TEST(Chebyshev, DegreeOneOnZ) {
  PauliHamiltonian h = single_z();
  Agsp a = agsp_chebyshev(diagonalize(h), 1);
  Vec one = Vec::Zero(2);
  one(1) = 1.0;
  EXPECT_LT((a.op * one - one).norm(), 1e-12);
  EXPECT_LT(std::abs(a.op(0, 0)), 1.0);
}

TEST(Chebyshev, HeisenbergTwoDegreeThreeBound) {
  SpectralData s = diagonalize(build_heisenberg_chain(2));
  AgspParams p = verify_agsp(agsp_chebyshev(s, 3).op, s.ground_projector);
  EXPECT_LE(p.sqrt_delta(),
            2.0 * std::exp(-2.0 * 3.0 * std::sqrt(4.0 / (3.0 + 3.0))));
}

TEST(Chebyshev, GaplessIsRejected) {
  PauliHamiltonian h(1, {{1.0, PauliString::parse("I")}});
  try {
    agsp_chebyshev(diagonalize(h), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerateInstance);
  }
}

TEST(ChebyshevProperty, FixesGroundSpaceAndMeetsBound) {
  for (const PauliHamiltonian& h : test_systems()) {
    SpectralData s = diagonalize(h);
    double previous = 2.0;
    for (int ell = 1; ell <= 6; ++ell) {
      Mat k = agsp_chebyshev(s, ell).op;
      EXPECT_LT((k * s.ground_projector - s.ground_projector).norm(), 1e-9);
      AgspParams p = verify_agsp(k, s.ground_projector);
      EXPECT_LE(p.sqrt_delta(), chebyshev_sqrt_delta_bound(s, ell) + 1e-12)
          << "ell=" << ell;
      EXPECT_LE(p.delta, previous + 1e-12);
      previous = p.delta;
    }
  }
}

TEST(Verify, ExactProjector) {
  SpectralData s = diagonalize(build_heisenberg_chain(3));
  AgspParams p = verify_agsp(s.ground_projector, s.ground_projector);
  EXPECT_NEAR(p.delta, 0.0, 1e-12);
  EXPECT_NEAR(p.gamma, 1.0, 1e-12);
  EXPECT_NEAR(p.epsilon, 0.0, 1e-12);
}

TEST(VerifyProperty, ReverifyingProjectedOperatorKeepsEpsilon) {
  PauliHamiltonian h = build_heisenberg_chain(3);
  SpectralData s = diagonalize(h);
  for (double eps : {0.05, 0.2, 0.4}) {
    Mat k = agsp_product(h, eps, Weighting::kUnit).op;
    AgspVerification v = verify_agsp_full(k, s.ground_projector);
    Mat projected = v.projector * k * v.projector;
    AgspParams again = verify_agsp(projected, s.ground_projector);
    EXPECT_NEAR(again.epsilon, v.params.epsilon, 1e-10);
  }
}

TEST(Mixture, SingleTermKraus) {
  PauliHamiltonian h = single_z();
  std::vector<Mat> e = mixture_kraus(h, 0.2);
  ASSERT_EQ(e.size(), 1u);
  Mat k = 0.5 * (Mat::Identity(2, 2) - to_dense(h));
  EXPECT_LT((e[0] - (0.8 * Mat::Identity(2, 2) + 0.2 * k)).norm(), 1e-14);
}

TEST(Mixture, CompletenessDefectBound) {
  PauliHamiltonian h = build_heisenberg_chain(2);
  for (double eps : {0.01, 0.1, 0.3}) {
    Mat sum = Mat::Zero(4, 4);
    for (const Mat& e : mixture_kraus(h, eps)) sum += e.adjoint() * e;
    EXPECT_LE(spectral_norm(sum - Mat::Identity(4, 4)),
              2.0 * eps + eps * eps + 1e-12);
  }
}

TEST(Mixture, RepeatedChannelApproximatesProduct) {
  PauliHamiltonian h = build_heisenberg_chain(2);
  Rng rng(11);
  Mat rho = random_density(4, rng);
  const int m = static_cast<int>(h.num_terms());
  auto residual = [&](double eps) {
    std::vector<Mat> e = mixture_kraus(h, eps);
    Mat r = rho;
    for (int step = 0; step < 2 * m; ++step) {
      Mat next = Mat::Zero(4, 4);
      for (const Mat& a : e) next += a * r * a.adjoint();
      r = next;
    }
    Mat k = agsp_product(h, eps).op;
    return trace_norm(r - k * rho * k.adjoint());
  };
  const double r2 = residual(1e-2);
  const double r3 = residual(1e-3);
  EXPECT_GT(r2 / r3, 50.0);
}

}  // namespace
}  // namespace dqe
