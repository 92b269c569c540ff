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
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dqe/agsp.hpp"
#include "dqe/instrument.hpp"
#include "dqe/pauli.hpp"
#include "dqe/stopping.hpp"

namespace dqe {

/// Hamiltonian plus its exact spectral data, shared read-only by runs.
struct System {
  explicit System(PauliHamiltonian h);

  PauliHamiltonian hamiltonian;
  SpectralData spectral;
  Mat ground_vectors;  ///< orthonormal basis of the ground space
};

enum class AgspMode {
  kLinearGlobal,   ///< one global instrument with E0 = (1 - H/kappa)/2
  kProductSweep,   ///< terms 1..m then m..1
  kMixtureRandom,  ///< one uniformly random term per micro-step
};

enum class ResamplingScope { kGlobal, kLocal };

AgspMode parse_agsp_mode(const std::string& name);
const char* to_string(AgspMode m);
ResamplingScope parse_resampling(const std::string& name);
const char* to_string(ResamplingScope r);

/// Externally supplied per-term instruments (e.g. noisy ones). Used in place
/// of the ideal weak measurements; requires a constant schedule.
struct TermInstruments {
  std::vector<Instrument> terms;
};

struct RunConfig {
  AgspMode mode = AgspMode::kProductSweep;
  Weighting weighting = Weighting::kNormalized;
  EpsilonSchedule schedule = EpsilonSchedule::constant(0.1);
  ResamplingScope resampling = ResamplingScope::kGlobal;
  StoppingRule rule = StoppingRule::first_run_of_zeros(4);
  std::uint64_t seed = 1;
  std::int64_t max_steps = 1000000;
  bool record_series = false;
  /// Mixture micro-steps per recorded step; 0 means 2m.
  int mixture_steps = 0;
  std::shared_ptr<const TermInstruments> override_terms;
};

struct TrajectoryRecord {
  std::vector<std::uint8_t> outcomes;  ///< one bit per step
  std::int64_t stop_step = 0;
  std::int64_t stopped_run_length = 0;
  double final_overlap = 0.0;
  double final_energy = 0.0;
  bool truncated = false;
  std::int64_t degenerate_failures = 0;
  /// Filled when record_series is set.
  std::vector<double> energy_series;
  std::vector<double> overlap_series;
  /// Debug channel: index of the failing term per step, -1 for success.
  std::vector<int> failing_term;
};

/// Compensated running sum.
class KahanSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct EnsembleStats {
  std::int64_t num_trajectories = 0;
  double mean_overlap = 0.0;
  double stderr_overlap = 0.0;
  double mean_energy = 0.0;
  double stderr_energy = 0.0;
  double mean_stop_step = 0.0;
  double stderr_stop_step = 0.0;
  double mean_run_length = 0.0;
  std::int64_t truncated = 0;
  std::map<std::int64_t, std::int64_t> run_length_histogram;
};

/// Per-trajectory summary row of an ensemble.
struct TrajectorySummary {
  std::int64_t id = 0;
  std::int64_t stop_step = 0;
  std::int64_t stopped_run_length = 0;
  double final_energy = 0.0;
  double final_overlap = 0.0;
  bool truncated = false;
};

struct EnsembleResult {
  EnsembleStats stats;
  std::vector<TrajectorySummary> rows;
};

/// <psi|H|psi> and <psi|Pi0|psi>.
std::pair<double, double> measure_observables(const System& system,
                                              const Vec& psi);
/// tr(H rho) and tr(Pi0 rho).
std::pair<double, double> measure_observables(const System& system,
                                              const Mat& rho);

TrajectoryRecord run_trajectory(const System& system, const RunConfig& cfg);

/// Seeds trajectory i with derive_seed(cfg.seed, i). The aggregate does not
/// depend on `parallelism` (0 = hardware concurrency).
EnsembleResult run_ensemble(const System& system, const RunConfig& cfg,
                            std::int64_t num_trajectories, int parallelism = 1);

EnsembleStats aggregate(const std::vector<TrajectorySummary>& rows);

}  // namespace dqe
