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

#include "dqe/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "dqe/circuits.hpp"
#include "dqe/errors.hpp"

namespace dqe {

namespace {

/// Kraus operators of a CP map given by its Choi matrix
/// J = sum_ij |i><j| (x) Phi(|i><j|).
std::vector<Mat> kraus_from_choi(const Mat& choi, Index dim) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(choi));
  const RVec& w = es.eigenvalues();
  double top = std::max(w.maxCoeff(), 0.0);
  std::vector<Mat> ops;
  for (Index k = w.size() - 1; k >= 0; --k) {
    if (w(k) <= 1e-13 * std::max(top, 1e-300)) continue;
    Mat a(dim, dim);
    for (Index in = 0; in < dim; ++in) {
      for (Index out = 0; out < dim; ++out) {
        a(out, in) = std::sqrt(w(k)) * es.eigenvectors()(in * dim + out, k);
      }
    }
    ops.push_back(std::move(a));
  }
  if (ops.empty()) ops.push_back(Mat::Zero(dim, dim));
  return ops;
}

/// Random isometry dim -> blocks * dim split into `blocks` square blocks.
std::vector<Mat> random_isometry_blocks(Index dim, int blocks, Rng& rng) {
  Mat u = random_unitary(dim * blocks, rng);
  std::vector<Mat> out;
  for (int b = 0; b < blocks; ++b) out.push_back(u.block(b * dim, 0, dim, dim));
  return out;
}

void check_depolarizing(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    fail(ErrorKind::kInvalidNoise, std::string(what) + " must lie in [0, 1]");
  }
}

}  // namespace

NoiseModel NoiseModel::none() { return NoiseModel{}; }

NoiseModel NoiseModel::depolarizing(double p1, double p2) {
  NoiseModel m;
  m.kind = NoiseKind::kDepolarizingPerGate;
  m.p1 = p1;
  m.p2 = p2;
  m.validate();
  return m;
}

NoiseModel NoiseModel::perturbation(double delta, std::uint64_t seed) {
  NoiseModel m;
  m.kind = NoiseKind::kChannelPerturbation;
  m.delta = delta;
  m.seed = seed;
  m.validate();
  return m;
}

void NoiseModel::validate() const {
  check_depolarizing(p1, "1-qubit depolarizing rate");
  check_depolarizing(p2, "2-qubit depolarizing rate");
  if (!(delta >= 0.0 && delta <= 1.0)) {
    fail(ErrorKind::kInvalidNoise, "perturbation budget must lie in [0, 1]");
  }
}

Instrument noisy_term_instrument(const PauliTerm& term, double kappa_v,
                                 double eps, int num_qubits,
                                 Resampler resampler, const NoiseModel& noise) {
  noise.validate();
  const std::vector<int>& support = term.string.support();
  std::vector<Pauli> local;
  for (int q : support) local.push_back(term.string.at(q));
  PauliTerm local_term{term.coefficient, PauliString(local)};
  Circuit c = measurement_circuit(local_term, eps, kappa_v);

  const Index d = Index{1} << support.size();
  double p1 = noise.kind == NoiseKind::kDepolarizingPerGate ? noise.p1 : 0.0;
  double p2 = noise.kind == NoiseKind::kDepolarizingPerGate ? noise.p2 : 0.0;
  std::array<Mat, 2> choi{Mat::Zero(d * d, d * d), Mat::Zero(d * d, d * d)};
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      Mat unit = Mat::Zero(d, d);
      unit(i, j) = 1.0;
      std::array<Mat, 2> out = simulate_noisy_branches(c, unit, p1, p2);
      for (int b = 0; b < 2; ++b) {
        choi[static_cast<std::size_t>(b)].block(i * d, j * d, d, d) =
            out[static_cast<std::size_t>(b)];
      }
    }
  }
  return make_instrument_from_kraus(kraus_from_choi(choi[0], d),
                                    kraus_from_choi(choi[1], d), support,
                                    num_qubits, std::move(resampler));
}

Instrument perturb_instrument(const Instrument& inst, const NoiseModel& noise) {
  noise.validate();
  if (noise.kind == NoiseKind::kNone) return inst;
  if (noise.kind == NoiseKind::kDepolarizingPerGate) {
    fail(ErrorKind::kConfig,
         "depolarizing noise is defined on the gate-level circuit; use "
         "noisy_term_instrument");
  }
  if (noise.delta == 0.0) return inst;
  Rng rng(noise.seed);
  const Index d = inst.success.front().rows();
  std::vector<Mat> f = random_isometry_blocks(d, 2, rng);
  const double keep = std::sqrt(1.0 - noise.delta / 2.0);
  const double mix = std::sqrt(noise.delta / 2.0);
  std::vector<Mat> success;
  std::vector<Mat> failure;
  for (const Mat& a : inst.success) success.push_back(keep * a);
  for (const Mat& a : inst.failure) failure.push_back(keep * a);
  success.push_back(mix * f[0]);
  failure.push_back(mix * f[1]);
  return make_instrument_from_kraus(std::move(success), std::move(failure),
                                    inst.support, inst.num_qubits,
                                    inst.resampler);
}

TermInstruments noisy_term_instruments(const PauliHamiltonian& h, double eps,
                                       Weighting weighting,
                                       ResamplingScope scope,
                                       const NoiseModel& noise) {
  noise.validate();
  const int n = h.num_qubits();
  std::vector<LocalFactor> factors = pauli_factors(h, weighting);
  TermInstruments out;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const LocalFactor& f = factors[i];
    Resampler r = scope == ResamplingScope::kGlobal ? Resampler::global(n)
                                                    : Resampler::local(f.support);
    switch (noise.kind) {
      case NoiseKind::kNone:
        out.terms.push_back(make_weak_instrument(f, eps, n, r));
        break;
      case NoiseKind::kDepolarizingPerGate:
        out.terms.push_back(noisy_term_instrument(h.terms()[i], f.weight, eps,
                                                  n, r, noise));
        break;
      case NoiseKind::kChannelPerturbation: {
        NoiseModel local = noise;
        local.seed = derive_seed(noise.seed, i);
        out.terms.push_back(
            perturb_instrument(make_weak_instrument(f, eps, n, r), local));
        break;
      }
    }
  }
  return out;
}

double success_transfer_distance(const Instrument& a, const Instrument& b) {
  if (a.support != b.support) {
    fail(ErrorKind::kParameter, "instruments act on different supports");
  }
  TransferMatrix ta = transfer_of_kraus(a.success);
  TransferMatrix tb = transfer_of_kraus(b.success);
  return spectral_norm(ta.matrix - tb.matrix);
}

std::vector<Mat> random_channel_kraus(Index dim, int num_kraus, Rng& rng) {
  if (num_kraus < 1) fail(ErrorKind::kParameter, "need at least one Kraus op");
  return random_isometry_blocks(dim, num_kraus, rng);
}

TransferMatrix perturb_channel(const TransferMatrix& t, double delta,
                               Rng& rng) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    fail(ErrorKind::kInvalidNoise, "perturbation budget must lie in [0, 1]");
  }
  TransferMatrix f = transfer_of_kraus(random_channel_kraus(t.dim, 2, rng));
  TransferMatrix out;
  out.dim = t.dim;
  out.matrix = (1.0 - delta / 2.0) * t.matrix + (delta / 2.0) * f.matrix;
  out.trace_preserving = is_trace_preserving(out.matrix, t.dim);
  return out;
}

BoundValue resilience_bound_asymptotic(const AgspParams& params, double delta) {
  double sg = params.sqrt_gamma();
  double scale = sg * (sg - params.sqrt_delta());
  if (!(delta >= 0.0)) fail(ErrorKind::kParameter, "delta must be >= 0");
  if (2.0 * delta >= scale) return {0.0, true};
  return {1.0 - params.epsilon - 2.0 * delta / (scale - 2.0 * delta), false};
}

double fixed_point_resilience_bound(const AgspParams& params, double delta,
                                    double dim, double degeneracy) {
  double ratio = 0.0;
  if (params.gamma < 1.0) {
    ratio = params.delta < 1.0 ? (1.0 - params.gamma) / (1.0 - params.delta)
                               : std::numeric_limits<double>::infinity();
  }
  return 1.0 - (ratio + delta) * (dim / degeneracy - 1.0) - params.epsilon -
         delta;
}

std::vector<double> free_decay_overlaps(const System& system, double p,
                                        std::int64_t steps) {
  check_depolarizing(p, "depolarizing rate");
  const int n = system.hamiltonian.num_qubits();
  const Mat& pi0 = system.spectral.ground_projector;
  Mat rho = pi0 / double(system.spectral.degeneracy);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back((pi0 * rho).trace().real());
  const Mat x = pauli_matrix(Pauli::kX);
  const Mat y = pauli_matrix(Pauli::kY);
  const Mat z = pauli_matrix(Pauli::kZ);
  auto conj = [&](const Mat& u, int q, const Mat& r) {
    Mat left = apply_local_left(u, {q}, n, r);
    return Mat(apply_local_left(u, {q}, n, left.adjoint()).adjoint());
  };
  for (std::int64_t t = 0; t < steps; ++t) {
    for (int q = 0; q < n; ++q) {
      Mat twirl = rho + conj(x, q, rho) + conj(y, q, rho) + conj(z, q, rho);
      rho = (1.0 - p) * rho + (p / 4.0) * twirl;
    }
    out.push_back((pi0 * rho).trace().real());
  }
  return out;
}

ResilienceReport run_resilience_experiment(
    const System& system, const RunConfig& base, const NoiseModel& noise,
    const std::vector<std::int64_t>& runtimes, std::int64_t trajectories,
    int parallelism, bool measure_delta) {
  if (base.mode == AgspMode::kLinearGlobal) {
    fail(ErrorKind::kConfig, "noise experiments need per-term instruments");
  }
  if (base.schedule.kind != ScheduleKind::kConstant) {
    fail(ErrorKind::kConfig, "noise experiments need a constant schedule");
  }
  if (runtimes.empty()) fail(ErrorKind::kConfig, "no runtimes given");
  const PauliHamiltonian& h = system.hamiltonian;
  const double eps = base.schedule.eps;
  auto noisy = std::make_shared<TermInstruments>(noisy_term_instruments(
      h, eps, base.weighting, base.resampling, noise));

  ResilienceReport rep;
  rep.runtimes = runtimes;
  Agsp clean = agsp_product(h, eps, base.weighting);
  rep.clean_params = verify_agsp(clean.op, system.spectral.ground_projector);
  rep.delta_measured = -1.0;
  if (measure_delta && h.num_qubits() <= transfer_qubit_limit()) {
    TermInstruments ideal = noisy_term_instruments(
        h, eps, base.weighting, base.resampling, NoiseModel::none());
    SweepTransfer a = sweep_transfer_of(ideal, base.mode, base.mixture_steps);
    SweepTransfer b = sweep_transfer_of(*noisy, base.mode, base.mixture_steps);
    rep.delta_measured = spectral_norm(a.e0.matrix - b.e0.matrix);
    rep.asymptotic_bound =
        resilience_bound_asymptotic(rep.clean_params, rep.delta_measured);
  } else {
    rep.asymptotic_bound = {0.0, true};
  }

  double p = noise.kind == NoiseKind::kDepolarizingPerGate ? noise.p1 : 0.0;
  std::int64_t longest = *std::max_element(runtimes.begin(), runtimes.end());
  std::vector<double> decay = free_decay_overlaps(system, p, longest);

  double lo = 1.0;
  double hi = 0.0;
  for (std::size_t i = 0; i < runtimes.size(); ++i) {
    const std::int64_t t = runtimes[i];
    if (t < 1) fail(ErrorKind::kConfig, "runtimes must be >= 1");
    RunConfig cfg = base;
    cfg.override_terms = noisy;
    cfg.max_steps = t;
    if (cfg.rule.kind == StopKind::kSecretary) {
      cfg.rule.n = t;
    } else {
      cfg.rule.time_cap = t;
    }
    cfg.seed = derive_seed(base.seed, 0x7e5 + i);
    EnsembleStats st = run_ensemble(system, cfg, trajectories, parallelism).stats;
    lo = std::min(lo, st.mean_overlap);
    hi = std::max(hi, st.mean_overlap);
    rep.stats.push_back(st);
    rep.free_decay.push_back(decay[static_cast<std::size_t>(t)]);
  }
  rep.spread = hi - lo;
  return rep;
}

}  // namespace dqe
