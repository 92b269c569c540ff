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

#include "dqe/trajectory.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "dqe/errors.hpp"

namespace dqe {

System::System(PauliHamiltonian h)
    : hamiltonian(std::move(h)), spectral(diagonalize(hamiltonian)) {
  ground_vectors = spectral.eigenvectors.leftCols(spectral.degeneracy);
}

AgspMode parse_agsp_mode(const std::string& name) {
  if (name == "linear" || name == "linear-global") return AgspMode::kLinearGlobal;
  if (name == "product" || name == "product-sweep") return AgspMode::kProductSweep;
  if (name == "mixture" || name == "mixture-random") {
    return AgspMode::kMixtureRandom;
  }
  fail(ErrorKind::kConfig, "unknown agsp mode '" + name + "'");
}

const char* to_string(AgspMode m) {
  switch (m) {
    case AgspMode::kLinearGlobal:
      return "linear-global";
    case AgspMode::kProductSweep:
      return "product-sweep";
    case AgspMode::kMixtureRandom:
      return "mixture-random";
  }
  return "?";
}

ResamplingScope parse_resampling(const std::string& name) {
  if (name == "global") return ResamplingScope::kGlobal;
  if (name == "local") return ResamplingScope::kLocal;
  fail(ErrorKind::kConfig, "resampling must be 'global' or 'local'");
}

const char* to_string(ResamplingScope r) {
  return r == ResamplingScope::kGlobal ? "global" : "local";
}

void KahanSum::add(double x) {
  double y = x - comp_;
  double t = sum_ + y;
  comp_ = (t - sum_) - y;
  sum_ = t;
}

std::pair<double, double> measure_observables(const System& system,
                                              const Vec& psi) {
  double energy = psi.dot(apply_hamiltonian(system.hamiltonian, psi)).real();
  double overlap = (system.ground_vectors.adjoint() * psi).squaredNorm();
  return {energy, overlap};
}

std::pair<double, double> measure_observables(const System& system,
                                              const Mat& rho) {
  Mat h = to_dense(system.hamiltonian);
  double energy = (h * rho).trace().real();
  double overlap = (system.spectral.ground_projector * rho).trace().real();
  return {energy, overlap};
}

namespace {

/// Instruments for one eps value, built on demand.
class InstrumentBank {
 public:
  InstrumentBank(const System& system, const RunConfig& cfg)
      : system_(system), cfg_(cfg) {
    const PauliHamiltonian& h = system.hamiltonian;
    if (h.num_terms() == 0) {
      fail(ErrorKind::kInvalidInstance, "Hamiltonian has no terms");
    }
    factors_ = pauli_factors(h, cfg.weighting);
    if (cfg.mode == AgspMode::kLinearGlobal) {
      Agsp lin = agsp_linear(h, system.spectral);
      global_ = make_global_instrument(lin.op, Resampler::global(h.num_qubits()));
    }
    if (cfg.override_terms) {
      if (cfg.schedule.kind != ScheduleKind::kConstant) {
        fail(ErrorKind::kConfig, "supplied instruments need a constant schedule");
      }
      if (cfg.override_terms->terms.size() != h.num_terms()) {
        fail(ErrorKind::kConfig, "supplied instrument count != term count");
      }
    }
  }

  const Instrument& global() const { return global_; }

  /// Instruments for the j-th step of a run (j >= 1).
  const std::vector<Instrument>& terms(std::int64_t j) {
    if (cfg_.override_terms) return cfg_.override_terms->terms;
    std::size_t slot = cfg_.schedule.kind == ScheduleKind::kConstant
                           ? 0
                           : static_cast<std::size_t>(j - 1);
    if (slot >= cache_.size()) cache_.resize(slot + 1);
    if (cache_[slot].empty()) {
      double eps = epsilon_at(cfg_.schedule, j, 0);
      const int n = system_.hamiltonian.num_qubits();
      for (const LocalFactor& f : factors_) {
        Resampler r = cfg_.resampling == ResamplingScope::kGlobal
                          ? Resampler::global(n)
                          : Resampler::local(f.support);
        cache_[slot].push_back(make_weak_instrument(f, eps, n, r));
      }
    }
    return cache_[slot];
  }

 private:
  const System& system_;
  const RunConfig& cfg_;
  std::vector<LocalFactor> factors_;
  Instrument global_;
  std::vector<std::vector<Instrument>> cache_;
};

}  // namespace

TrajectoryRecord run_trajectory(const System& system, const RunConfig& cfg) {
  if (cfg.max_steps < 1) fail(ErrorKind::kConfig, "max_steps must be >= 1");
  const PauliHamiltonian& h = system.hamiltonian;
  InstrumentBank bank(system, cfg);
  const auto m = static_cast<int>(h.num_terms());
  const int micro = cfg.mixture_steps > 0 ? cfg.mixture_steps : 2 * m;

  Rng rng(cfg.seed);
  StoppingState stopper(cfg.rule, derive_seed(cfg.seed, 0x5707));
  Vec psi = Vec::Zero(h.dimension());
  psi(static_cast<Index>(rng() % static_cast<std::uint64_t>(h.dimension()))) =
      1.0;

  TrajectoryRecord rec;
  Vec snapshot;
  std::int64_t snapshot_len = -1;
  std::int64_t run = 0;

  for (std::int64_t step = 1;; ++step) {
    int bit = 0;
    int failing = -1;
    auto measure = [&](const Instrument& inst, int index) {
      SampledOutcome o = apply_sampled(inst, psi, rng);
      if (o.degenerate_failure) ++rec.degenerate_failures;
      if (o.bit == 1) {
        bit = 1;
        failing = index;
      }
      return o.bit == 0;
    };
    if (cfg.mode == AgspMode::kLinearGlobal) {
      measure(bank.global(), 0);
    } else {
      const std::vector<Instrument>& terms = bank.terms(run + 1);
      if (cfg.mode == AgspMode::kProductSweep) {
        bool ok = true;
        for (int i = 0; i < m && ok; ++i) ok = measure(terms[i], i);
        for (int i = m - 1; i >= 0 && ok; --i) ok = measure(terms[i], i);
      } else {
        for (int s = 0; s < micro; ++s) {
          int i = static_cast<int>(rng() % static_cast<std::uint64_t>(m));
          if (!measure(terms[i], i)) break;
        }
      }
    }
    rec.outcomes.push_back(static_cast<std::uint8_t>(bit));
    run = bit == 0 ? run + 1 : 0;
    if (cfg.record_series) {
      auto [e, o] = measure_observables(system, psi);
      rec.energy_series.push_back(e);
      rec.overlap_series.push_back(o);
      rec.failing_term.push_back(failing);
    }
    if (bit == 0 && run > snapshot_len) {
      snapshot = psi;
      snapshot_len = run;
    }
    Decision d = stopper.observe(bit);
    if (d == Decision::kContinue && step >= cfg.max_steps) {
      d = Decision::kTruncated;
    }
    if (d == Decision::kContinue) continue;
    rec.stop_step = step;
    if (d == Decision::kStop) {
      rec.stopped_run_length = run;
    } else {
      rec.truncated = true;
      if (snapshot_len > 0) {
        psi = snapshot;
        rec.stopped_run_length = snapshot_len;
      } else {
        rec.stopped_run_length = 0;
      }
    }
    break;
  }
  auto [energy, overlap] = measure_observables(system, psi);
  rec.final_energy = energy;
  rec.final_overlap = overlap;
  return rec;
}

EnsembleStats aggregate(const std::vector<TrajectorySummary>& rows) {
  EnsembleStats st;
  st.num_trajectories = static_cast<std::int64_t>(rows.size());
  if (rows.empty()) return st;
  KahanSum so, so2, se, se2, st1, st2, sl;
  for (const TrajectorySummary& r : rows) {
    so.add(r.final_overlap);
    so2.add(r.final_overlap * r.final_overlap);
    se.add(r.final_energy);
    se2.add(r.final_energy * r.final_energy);
    double t = static_cast<double>(r.stop_step);
    st1.add(t);
    st2.add(t * t);
    sl.add(static_cast<double>(r.stopped_run_length));
    if (r.truncated) ++st.truncated;
    ++st.run_length_histogram[r.stopped_run_length];
  }
  const double n = static_cast<double>(rows.size());
  auto moments = [n](const KahanSum& s1, const KahanSum& s2, double& mean,
                     double& err) {
    mean = s1.value() / n;
    if (n < 2) {
      err = 0.0;
      return;
    }
    double var = (s2.value() - n * mean * mean) / (n - 1.0);
    err = std::sqrt(std::max(0.0, var) / n);
  };
  moments(so, so2, st.mean_overlap, st.stderr_overlap);
  moments(se, se2, st.mean_energy, st.stderr_energy);
  moments(st1, st2, st.mean_stop_step, st.stderr_stop_step);
  st.mean_run_length = sl.value() / n;
  return st;
}

EnsembleResult run_ensemble(const System& system, const RunConfig& cfg,
                            std::int64_t num_trajectories, int parallelism) {
  if (num_trajectories < 1) {
    fail(ErrorKind::kConfig, "need at least one trajectory");
  }
  EnsembleResult out;
  out.rows.resize(static_cast<std::size_t>(num_trajectories));
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&]() {
    RunConfig local = cfg;
    local.record_series = false;
    for (;;) {
      std::int64_t i = next.fetch_add(1);
      if (i >= num_trajectories) return;
      try {
        local.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
        TrajectoryRecord r = run_trajectory(system, local);
        out.rows[static_cast<std::size_t>(i)] = {
            i, r.stop_step, r.stopped_run_length, r.final_energy,
            r.final_overlap, r.truncated};
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(num_trajectories);
        return;
      }
    }
  };

  int threads = parallelism > 0
                    ? parallelism
                    : static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  threads = static_cast<int>(
      std::min<std::int64_t>(threads, num_trajectories));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  out.stats = aggregate(out.rows);
  return out;
}

}  // namespace dqe
