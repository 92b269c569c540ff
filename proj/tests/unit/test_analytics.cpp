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
#include "dqe/analytics.hpp"
#include "dqe/errors.hpp"
#include "dqe/instrument.hpp"
#include "dqe/pauli.hpp"
#include "dqe/trajectory.hpp"

namespace dqe {
namespace {

struct RandomAgsp {
  Mat k;
  Mat pi;
};

/// Hermitian K with N eigenvalues in [lo, hi] and the rest of modulus at most
/// sqrt_delta.
RandomAgsp random_agsp(Index d, Index n, double lo, double hi,
                       double sqrt_delta, Rng& rng) {
  Mat u = random_unitary(d, rng);
  RVec ev(d);
  for (Index i = 0; i < d; ++i) {
    ev(i) = i < n ? lo + (hi - lo) * uniform01(rng)
                  : sqrt_delta * (2.0 * uniform01(rng) - 1.0);
  }
  return {hermitian_part(u * ev.cast<cplx>().asDiagonal() * u.adjoint()),
          hermitian_part(u.leftCols(n) * u.leftCols(n).adjoint())};
}

/// Expected steps to the first run of n successes for global resampling from
/// 1/D, by solving the absorbing run-length Markov chain.
double markov_chain_tau(const Mat& k, std::int64_t n) {
  const Index d = k.rows();
  std::vector<double> weight(static_cast<std::size_t>(n) + 1);
  Mat kj = Mat::Identity(d, d);
  for (std::int64_t j = 0; j <= n; ++j) {
    weight[static_cast<std::size_t>(j)] = (kj * kj.adjoint()).trace().real();
    kj = k * kj;
  }
  // T_j = 1 + q_j T_{j+1} + (1 - q_j) T_0 written as T_j = a_j + b_j T_0.
  double a = 0.0;
  double b = 0.0;
  for (std::int64_t j = n - 1; j >= 0; --j) {
    const double q = weight[static_cast<std::size_t>(j) + 1] /
                     weight[static_cast<std::size_t>(j)];
    const double na = 1.0 + q * a;
    const double nb = q * b + (1.0 - q);
    a = na;
    b = nb;
  }
  return a / (1.0 - b);
}

TransferMatrix global_failure(const Mat& k) {
  return transfer_of_instrument_failure(
      make_global_instrument(k, Resampler::global(static_cast<int>(
                                    std::log2(static_cast<double>(k.rows()))))));
}

TEST(Global, ProjectorTau) {
  // K = Pi with rank N: one 1/(N/D) wait then n - 1 certain successes.
  Mat pi = Mat::Zero(4, 4);
  pi(0, 0) = 1.0;
  EXPECT_NEAR(expected_tau_global(pi, 1), 4.0, 1e-12);
  EXPECT_NEAR(expected_tau_global(pi, 5), 8.0, 1e-12);
  pi(3, 3) = 1.0;
  EXPECT_NEAR(expected_tau_global(pi, 3), 4.0, 1e-12);
  EXPECT_NEAR(expected_overlap_global(pi, pi, 3), 1.0, 1e-14);
}

TEST(Global, ZeroStepsIsMaximallyMixed) {
  Rng rng(1);
  RandomAgsp a = random_agsp(4, 1, 0.8, 0.9, 0.3, rng);
  EXPECT_LT((expected_state_global(a.k, 0) - Mat::Identity(4, 4) / 4.0).norm(),
            1e-13);
  EXPECT_NEAR(expected_tau_global(a.k, 0), 0.0, 1e-14);
}

TEST(GlobalProperty, TauMatchesMarkovChain) {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    RandomAgsp a = random_agsp(8, 1 + trial % 3, 0.6, 0.95, 0.5, rng);
    for (std::int64_t n : {1, 2, 5, 12}) {
      const double oracle = markov_chain_tau(a.k, n);
      EXPECT_NEAR(expected_tau_global(a.k, n), oracle, 1e-9 * oracle);
    }
  }
}

TEST(GlobalProperty, StateMatchesMatrixPowers) {
  Rng rng(3);
  RandomAgsp a = random_agsp(8, 2, 0.6, 0.95, 0.5, rng);
  for (std::int64_t n : {1, 3, 10}) {
    Mat kn = matrix_power(a.k, static_cast<std::uint64_t>(n));
    Mat direct = kn * kn.adjoint();
    direct /= direct.trace().real();
    EXPECT_LT((expected_state_global(a.k, n) - direct).norm(), 1e-12);
  }
  // Large n stays finite and converges to the top eigenvector.
  Mat far = expected_state_global(a.k * 1e-3, 100000);
  EXPECT_TRUE(far.allFinite());
  EXPECT_NEAR(far.trace().real(), 1.0, 1e-12);
}

TEST(GlobalProperty, BoundsHold) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 1 + trial % 2;
    RandomAgsp a = random_agsp(8, n, 0.7, 0.95, 0.5, rng);
    AgspParams p = verify_agsp(a.k, a.pi);
    for (std::int64_t steps : {1, 4, 16}) {
      BoundValue lower = overlap_lower_bound(p, 8, double(n), steps);
      EXPECT_FALSE(lower.vacuous && lower.value > 0.0);
      EXPECT_LE(lower.value, expected_overlap_global(a.k, a.pi, steps) + 1e-12);
      EXPECT_LE(expected_tau_global(a.k, steps),
                expected_tau_bound(p, 8, double(n), steps) * (1 + 1e-12));
    }
    const double fp = (a.pi * fixed_point_direct(a.k)).trace().real();
    EXPECT_LE(fixed_point_overlap_bound(p, 8, double(n)), fp + 1e-12);
  }
}

TEST(Bounds, OverlapVacuousWhenGammaBelowDelta) {
  AgspParams p = AgspParams::from_roots(0.9, 0.8, 0.0);
  BoundValue b = overlap_lower_bound(p, 4, 1, 3);
  EXPECT_TRUE(b.vacuous);
  EXPECT_EQ(b.value, 0.0);
}

TEST(Bounds, OverlapClampedAndFlagged) {
  AgspParams p = AgspParams::from_roots(0.5, 0.6, 0.0);
  BoundValue b = overlap_lower_bound(p, 1024, 1, 1);
  EXPECT_TRUE(b.vacuous);
  EXPECT_EQ(b.value, 0.0);
  BoundValue good = overlap_lower_bound(p, 4, 1, 40);
  EXPECT_FALSE(good.vacuous);
  EXPECT_NEAR(good.value, 1.0 - 4.0 * std::pow(0.25 / 0.36, 40), 1e-14);
}

TEST(Bounds, DepthEstimateIsMinimal) {
  AgspParams p = AgspParams::from_roots(0.5, 0.9, 0.0);
  for (double target : {0.1, 0.01, 1e-6}) {
    const std::int64_t n = depth_estimate(p, 32, 2, target);
    auto err = [&](std::int64_t k) {
      return 16.0 * std::pow(p.delta / p.gamma, static_cast<double>(k));
    };
    EXPECT_LE(err(n), target);
    if (n > 0) {
      EXPECT_GT(err(n - 1), target);
    }
  }
}

TEST(Bounds, ChebyshevFixedPoint) {
  SpectralData s = diagonalize(build_heisenberg_chain(4));
  for (int ell = 2; ell <= 8; ell += 2) {
    Mat k = chebyshev_fixed_point_operator(s, ell);
    EXPECT_LT(spectral_norm(k), 1.0);
    const double overlap =
        (s.ground_projector * fixed_point_direct(k)).trace().real();
    BoundValue b = chebyshev_fixed_point_bound(s, ell);
    if (!b.vacuous) {
      EXPECT_LE(b.value, overlap + 1e-12) << ell;
    }
  }
}

TEST(General, GlobalResamplingMatchesClosedForm) {
  Rng rng(5);
  RandomAgsp a = random_agsp(4, 1, 0.7, 0.9, 0.5, rng);
  TransferMatrix e0 = transfer_of_kraus({a.k});
  TransferMatrix e1 = global_failure(a.k);
  Mat rho0 = Mat::Identity(4, 4) / 4.0;
  for (std::int64_t n : {1, 2, 6}) {
    GeneralExpectation g = expected_general(e0, e1, rho0, n);
    EXPECT_LT((g.state - expected_state_global(a.k, n)).norm(), 1e-10);
    EXPECT_NEAR(g.tau, expected_tau_global(a.k, n),
                1e-9 * expected_tau_global(a.k, n));
    GeneralExpectation f = expected_general_factored(e0, e1, rho0, n);
    EXPECT_LT((f.state - g.state).norm(), 1e-9);
    EXPECT_NEAR(f.tau, g.tau, 1e-8 * g.tau);
  }
}

TEST(GeneralProperty, LocalResamplingIdentities) {
  PauliHamiltonian h = build_heisenberg_chain(3);
  SweepTransfer sw = sweep_transfer(h, AgspMode::kProductSweep, 0.2,
                                    Weighting::kUnit, ResamplingScope::kLocal);
  EXPECT_TRUE(is_trace_preserving(sw.e0.matrix + sw.e1.matrix, 8, 1e-10));
  Rng rng(6);
  for (std::int64_t n : {1, 3, 8}) {
    Mat rho0 = random_density(8, rng);
    GeneralExpectation g = expected_general(sw.e0, sw.e1, rho0, n);
    EXPECT_NEAR(g.state.trace().real(), 1.0, 1e-10);
    EXPECT_LT((g.state - g.state.adjoint()).norm(), 1e-10);
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<Mat>(hermitian_part(g.state))
                  .eigenvalues()
                  .minCoeff(),
              -1e-10);
    EXPECT_GE(g.tau, static_cast<double>(n));
    EXPECT_LT(stopped_map_trace_defect(sw.e0, sw.e1, n), 1e-9);
    EXPECT_NEAR(sequence_probability(sw.e0, sw.e1, rho0, n), 1.0, 1e-9);
    GeneralExpectation f = expected_general_factored(sw.e0, sw.e1, rho0, n);
    EXPECT_LT((f.state - g.state).norm(), 1e-8);
    EXPECT_NEAR(f.tau, g.tau, 1e-7 * g.tau);
  }
  EXPECT_LT(failure_map_trace_defect(sw.e0, sw.e1), 1e-9);
}

TEST(General, UnreachableSuccessIsIllConditioned) {
  Mat k = Mat::Zero(2, 2);
  k(0, 0) = 1.0;
  Mat to_one_a = Mat::Zero(2, 2);
  to_one_a(1, 0) = 1.0;
  Mat to_one_b = Mat::Zero(2, 2);
  to_one_b(1, 1) = 1.0;
  Instrument inst =
      make_global_instrument(k, Resampler::custom({to_one_a, to_one_b}, 0.0));
  TransferMatrix e0 = transfer_of_instrument_success(inst);
  TransferMatrix e1 = transfer_of_instrument_failure(inst);
  EXPECT_THROW(check_resampling_condition(e0, e1, Mat::Identity(2, 2) / 2.0),
               IllConditionedError);
}

TEST(Decaying, SingleStepMatchesProductOperator) {
  PauliHamiltonian h = build_heisenberg_chain(2);
  Mat k = agsp_product(h, 0.3, Weighting::kUnit).op;
  Mat direct = k * k.adjoint();
  direct /= direct.trace().real();
  EXPECT_LT((expected_state_decaying(h, 0.3, Weighting::kUnit, 1) - direct).norm(),
            1e-12);
  Mat k2 = agsp_product(h, 0.15, Weighting::kUnit).op * k;
  Mat two = k2 * k2.adjoint();
  two /= two.trace().real();
  EXPECT_LT((expected_state_decaying(h, 0.3, Weighting::kUnit, 2) - two).norm(),
            1e-12);
}

TEST(Sweep, GlobalProductMatchesProductOperator) {
  PauliHamiltonian h = build_heisenberg_chain(2);
  SweepTransfer sw = sweep_transfer(h, AgspMode::kProductSweep, 0.25,
                                    Weighting::kNormalized,
                                    ResamplingScope::kGlobal);
  Mat k = agsp_product(h, 0.25, Weighting::kNormalized).op;
  EXPECT_LT((sw.e0.matrix - transfer_of_kraus({k}).matrix).norm(), 1e-12);
  EXPECT_LT((sw.e1.matrix - global_failure(k).matrix).norm(), 1e-12);
}

TEST(MonteCarlo, EnsembleMatchesExactExpectation) {
  System sys(build_heisenberg_chain(2));
  RunConfig cfg;
  cfg.mode = AgspMode::kProductSweep;
  cfg.weighting = Weighting::kUnit;
  cfg.schedule = EpsilonSchedule::constant(0.2);
  cfg.resampling = ResamplingScope::kLocal;
  cfg.rule = StoppingRule::first_run_of_zeros(3);
  cfg.seed = 17;
  SweepTransfer sw = sweep_transfer(sys.hamiltonian, cfg.mode, 0.2,
                                    cfg.weighting, cfg.resampling);
  GeneralExpectation g =
      expected_general(sw.e0, sw.e1, Mat::Identity(4, 4) / 4.0, 3);
  const double overlap =
      (sys.spectral.ground_projector * g.state).trace().real();
  EnsembleResult r = run_ensemble(sys, cfg, 20000, 1);
  EXPECT_EQ(r.stats.truncated, 0);
  EXPECT_LT(std::abs(r.stats.mean_stop_step - g.tau),
            3.0 * r.stats.stderr_stop_step);
  EXPECT_LT(std::abs(r.stats.mean_overlap - overlap),
            3.0 * r.stats.stderr_overlap);
}

}  // namespace
}  // namespace dqe
