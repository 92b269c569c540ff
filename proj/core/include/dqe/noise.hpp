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
#include <vector>

#include "dqe/agsp.hpp"
#include "dqe/analytics.hpp"
#include "dqe/instrument.hpp"
#include "dqe/trajectory.hpp"

namespace dqe {

enum class NoiseKind { kNone, kDepolarizingPerGate, kChannelPerturbation };

struct NoiseModel {
  NoiseKind kind = NoiseKind::kNone;
  double p1 = 0.0;  ///< 1-qubit depolarizing rate
  double p2 = 0.0;  ///< 2-qubit depolarizing rate
  double delta = 0.0;  ///< perturbation budget in induced trace norm
  std::uint64_t seed = 1;

  static NoiseModel none();
  static NoiseModel depolarizing(double p1, double p2);
  static NoiseModel perturbation(double delta, std::uint64_t seed);
  /// Throws an invalid-noise error for rates outside [0, 1].
  void validate() const;
};

/// Instrument of one Pauli term realized by its gate-level circuit with
/// depolarizing noise after every gate. The per-outcome maps are read off the
/// dense circuit simulation and turned into Kraus operators via their Choi
/// matrices.
Instrument noisy_term_instrument(const PauliTerm& term, double kappa_v,
                                 double eps, int num_qubits,
                                 Resampler resampler, const NoiseModel& noise);

/// E' = (1 - delta/2) E + (delta/2) F with F a random two-outcome instrument
/// on the same support, so each branch moves by at most delta. Depolarizing
/// models need the circuit and are handled by noisy_term_instrument.
Instrument perturb_instrument(const Instrument& inst, const NoiseModel& noise);

/// Per-term instruments for run_trajectory under a noise model.
TermInstruments noisy_term_instruments(const PauliHamiltonian& h, double eps,
                                       Weighting weighting,
                                       ResamplingScope scope,
                                       const NoiseModel& noise);

/// Spectral norm of the difference of the success-branch transfer matrices.
double success_transfer_distance(const Instrument& a, const Instrument& b);

/// Kraus operators of a Haar-random channel on a dim-dimensional space.
std::vector<Mat> random_channel_kraus(Index dim, int num_kraus, Rng& rng);

/// (1 - delta/2) T + (delta/2) F with F a random channel.
TransferMatrix perturb_channel(const TransferMatrix& t, double delta, Rng& rng);

/// 1 - eps - 2 delta/(sqrt(G)(sqrt(G) - sqrt(D)) - 2 delta); vacuous when
/// delta reaches sqrt(G)(sqrt(G) - sqrt(D))/2.
BoundValue resilience_bound_asymptotic(const AgspParams& params, double delta);

/// 1 - ((1 - G)/(1 - D) + delta)(dim/N - 1) - eps - delta.
double fixed_point_resilience_bound(const AgspParams& params, double delta,
                                    double dim, double degeneracy);

/// Ground-space overlap of Pi0/N after t = 0..steps rounds of 1-qubit
/// depolarizing noise on every qubit.
std::vector<double> free_decay_overlaps(const System& system, double p,
                                        std::int64_t steps);

struct ResilienceReport {
  double delta_measured = 0.0;  ///< sweep-level |E0' - E0|, -1 if not formed
  AgspParams clean_params;      ///< measured on the clean sweep operator
  BoundValue asymptotic_bound;
  std::vector<std::int64_t> runtimes;
  std::vector<EnsembleStats> stats;
  std::vector<double> free_decay;  ///< baseline overlap at each runtime
  /// max - min of the mean overlaps across runtimes.
  double spread = 0.0;
};

/// Runs ensembles with the noisy instruments at each runtime cap. For
/// secretary rules the cap is the horizon; otherwise it is a time cap.
ResilienceReport run_resilience_experiment(const System& system,
                                           const RunConfig& base,
                                           const NoiseModel& noise,
                                           const std::vector<std::int64_t>& runtimes,
                                           std::int64_t trajectories,
                                           int parallelism = 1,
                                           bool measure_delta = true);

}  // namespace dqe
