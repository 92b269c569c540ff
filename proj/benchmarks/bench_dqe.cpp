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


#include <benchmark/benchmark.h>

#include "dqe/agsp.hpp"
#include "dqe/analytics.hpp"
#include "dqe/instrument.hpp"
#include "dqe/pauli.hpp"
#include "dqe/trajectory.hpp"

namespace {

using namespace dqe;

void BM_ApplyHamiltonian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  PauliHamiltonian h = build_heisenberg_chain(n);
  Rng rng(1);
  Vec psi = random_state(h.dimension(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(apply_hamiltonian(h, psi));
}
BENCHMARK(BM_ApplyHamiltonian)->DenseRange(4, 12, 4);

void BM_Diagonalize(benchmark::State& state) {
  PauliHamiltonian h = build_heisenberg_chain(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(diagonalize(h));
}
BENCHMARK(BM_Diagonalize)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

void BM_Trajectory(benchmark::State& state) {
  System sys(build_heisenberg_chain(static_cast<int>(state.range(0))));
  RunConfig cfg;
  cfg.mode = AgspMode::kProductSweep;
  cfg.rule = StoppingRule::first_run_of_zeros(4);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    cfg.seed = seed++;
    benchmark::DoNotOptimize(run_trajectory(sys, cfg));
  }
}
BENCHMARK(BM_Trajectory)->DenseRange(4, 10, 3)->Unit(benchmark::kMicrosecond);

void BM_SweepTransfer(benchmark::State& state) {
  PauliHamiltonian h = build_heisenberg_chain(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep_transfer(h, AgspMode::kProductSweep, 0.1,
                                            Weighting::kUnit,
                                            ResamplingScope::kLocal));
  }
}
BENCHMARK(BM_SweepTransfer)->DenseRange(2, 4, 1)->Unit(benchmark::kMillisecond);

void BM_ExpectedGeneral(benchmark::State& state) {
  PauliHamiltonian h = build_heisenberg_chain(static_cast<int>(state.range(0)));
  SweepTransfer sw = sweep_transfer(h, AgspMode::kProductSweep, 0.1,
                                    Weighting::kUnit, ResamplingScope::kLocal);
  const Index d = h.dimension();
  Mat rho0 = Mat::Identity(d, d) / double(d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(expected_general(sw.e0, sw.e1, rho0, 16));
  }
}
BENCHMARK(BM_ExpectedGeneral)->DenseRange(2, 4, 1)->Unit(benchmark::kMillisecond);

void BM_FixedPointDirect(benchmark::State& state) {
  const Index d = state.range(0);
  Rng rng(2);
  Mat k = 0.9 * hermitian_part(random_unitary(d, rng));
  for (auto _ : state) benchmark::DoNotOptimize(fixed_point_direct(k));
}
BENCHMARK(BM_FixedPointDirect)->RangeMultiplier(4)->Range(16, 256);

}  // namespace

BENCHMARK_MAIN();
