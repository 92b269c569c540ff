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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "dqe/agsp.hpp"
#include "dqe/analytics.hpp"
#include "dqe/circuits.hpp"
#include "dqe/instrument.hpp"
#include "dqe/noise.hpp"
#include "dqe/pauli.hpp"
#include "dqe/stopping.hpp"
#include "dqe/trajectory.hpp"

namespace {

using namespace dqe;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += "[failed: " + what + "] ";
    }
  }
  void note(const std::string& text) { detail += text + " "; }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Mat maximally_mixed(Index d) { return Mat::Identity(d, d) / double(d); }

double overlap(const Mat& pi, const Mat& rho) { return (pi * rho).trace().real(); }

/// Hermitian K with N eigenvalues in [lo, hi], the rest of modulus <= small.
std::pair<Mat, Mat> random_agsp(Index d, Index n, double lo, double hi,
                                double small, Rng& rng) {
  Mat u = random_unitary(d, rng);
  RVec ev(d);
  for (Index i = 0; i < d; ++i) {
    ev(i) = i < n ? lo + (hi - lo) * uniform01(rng)
                  : small * (2.0 * uniform01(rng) - 1.0);
  }
  return {hermitian_part(u * ev.cast<cplx>().asDiagonal() * u.adjoint()),
          hermitian_part(u.leftCols(n) * u.leftCols(n).adjoint())};
}

double markov_chain_tau(const Mat& k, std::int64_t n) {
  const Index d = k.rows();
  std::vector<double> w;
  Mat kj = Mat::Identity(d, d);
  for (std::int64_t j = 0; j <= n; ++j) {
    w.push_back((kj * kj.adjoint()).trace().real());
    kj = k * kj;
  }
  double a = 0.0;
  double b = 0.0;
  for (std::int64_t j = n - 1; j >= 0; --j) {
    const double q = w[static_cast<std::size_t>(j) + 1] / w[static_cast<std::size_t>(j)];
    a = 1.0 + q * a;
    b = q * b + (1.0 - q);
  }
  return a / (1.0 - b);
}

double zscore(double mean, double exact, double err) {
  return err > 0.0 ? (mean - exact) / err : (mean == exact ? 0.0 : INFINITY);
}

// ---------------------------------------------------------------------------

Outcome linear_agsp_parameters() {
  Outcome o;
  const std::vector<std::pair<std::string, PauliHamiltonian>> cases = {
      {"Z", PauliHamiltonian(1, {{1.0, PauliString::parse("Z")}})},
      {"heisenberg2", build_heisenberg_chain(2)},
      {"maxsat", build_maxsat(2, {{{0, 1}, "11"}})},
  };
  for (const auto& [name, h] : cases) {
    SpectralData s = diagonalize(h);
    Agsp k = agsp_linear(h, s);
    AgspParams p = verify_agsp(k.op, s.ground_projector);
    const double sg = (1.0 - s.lambda0 / h.kappa()) / 2.0;
    const double sd = (1.0 - s.lambda1 / h.kappa()) / 2.0;
    const double err = std::max(std::abs(p.sqrt_gamma() - sg),
                                std::abs(p.sqrt_delta() - sd));
    o.require(err <= 1e-9, name + " parameter error " + fmt("%.3g", err));
    o.note(name + ": sqrt_gamma=" + fmt("%.6f", p.sqrt_gamma()) +
           " sqrt_delta=" + fmt("%.6f", p.sqrt_delta()));
  }
  return o;
}

Outcome stopped_state_oracle() {
  Outcome o;
  const std::int64_t run_length = 4;
  const std::int64_t trajectories = 10000;
  for (int n : {2, 3, 4}) {
    System sys(build_heisenberg_chain(n));
    Agsp k = agsp_linear(sys.hamiltonian, sys.spectral);
    const Mat& pi0 = sys.spectral.ground_projector;
    RunConfig cfg;
    cfg.mode = AgspMode::kLinearGlobal;
    cfg.resampling = ResamplingScope::kGlobal;
    cfg.rule = StoppingRule::first_run_of_zeros(run_length);
    cfg.seed = 1000 + static_cast<std::uint64_t>(n);
    EnsembleStats st = run_ensemble(sys, cfg, trajectories, 1).stats;
    const double ov = expected_overlap_global(k.op, pi0, run_length);
    const double tau = expected_tau_global(k.op, run_length);
    const double zo = zscore(st.mean_overlap, ov, st.stderr_overlap);
    const double zt = zscore(st.mean_stop_step, tau, st.stderr_stop_step);
    o.require(std::abs(zo) <= 3.0, "overlap z at n=" + std::to_string(n));
    o.require(std::abs(zt) <= 3.0, "tau z at n=" + std::to_string(n));
    o.note("n=" + std::to_string(n) + " overlap " + fmt("%.4f", st.mean_overlap) +
           "/" + fmt("%.4f", ov) + " z=" + fmt("%.2f", zo) + ", tau " +
           fmt("%.2f", st.mean_stop_step) + "/" + fmt("%.2f", tau) + " z=" +
           fmt("%.2f", zt) + ";");
    AgspParams p = verify_agsp(k.op, pi0);
    const double dim = double(sys.spectral.dimension);
    const double deg = double(sys.spectral.degeneracy);
    for (std::int64_t steps = 1; steps <= 8; ++steps) {
      BoundValue b = overlap_lower_bound(p, dim, deg, steps);
      o.require(expected_overlap_global(k.op, pi0, steps) >= b.value - 1e-12,
                "overlap bound at n=" + std::to_string(n) +
                    " steps=" + std::to_string(steps));
    }
  }
  return o;
}

Outcome projector_run_time() {
  Outcome o;
  Mat pi = Mat::Zero(2, 2);
  pi(0, 0) = 1.0;
  const double tau = expected_tau_global(pi, 3);
  const double chain = markov_chain_tau(pi, 3);
  o.require(std::abs(tau - 4.0) <= 1e-12, "closed form " + fmt("%.15g", tau));
  o.require(std::abs(chain - tau) <= 1e-12, "Markov chain " + fmt("%.15g", chain));
  o.note("E(tau)=" + fmt("%.15g", tau) + " chain=" + fmt("%.15g", chain));
  return o;
}

Outcome general_resampling() {
  Outcome o;
  Rng rng(41);
  double worst_global = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const Index d = trial % 2 == 0 ? 8 : 16;
    auto [k, pi] = random_agsp(d, 1, 0.7, 0.95, 0.5, rng);
    TransferMatrix e0 = transfer_of_kraus({k});
    const int nq = static_cast<int>(std::lround(std::log2(double(d))));
    TransferMatrix e1 = transfer_of_instrument_failure(
        make_global_instrument(k, Resampler::global(nq)));
    for (std::int64_t n : {1, 3, 6}) {
      GeneralExpectation g = expected_general(e0, e1, maximally_mixed(d), n);
      const double tau = expected_tau_global(k, n);
      worst_global = std::max(
          {worst_global, (g.state - expected_state_global(k, n)).norm(),
           std::abs(g.tau - tau) / tau});
    }
  }
  o.require(worst_global <= 1e-8, "global reduction " + fmt("%.3g", worst_global));
  double worst_trace = 0.0;
  double worst_tp = 0.0;
  for (int n : {2, 3, 4}) {
    PauliHamiltonian h = build_heisenberg_chain(n);
    for (AgspMode mode : {AgspMode::kProductSweep, AgspMode::kMixtureRandom}) {
      SweepTransfer sw = sweep_transfer(h, mode, 0.1, Weighting::kUnit,
                                        ResamplingScope::kLocal, 1);
      const Index d = h.dimension();
      for (std::int64_t steps : {1, 4, 8}) {
        Mat rho0 = random_density(d, rng);
        GeneralExpectation g = expected_general(sw.e0, sw.e1, rho0, steps);
        worst_trace = std::max(worst_trace, std::abs(g.state.trace().real() - 1.0));
        worst_tp = std::max(worst_tp, stopped_map_trace_defect(sw.e0, sw.e1, steps));
      }
      // The two-site singlet is fixed by every factor, so 1 - E0 is singular
      // and the failure-map identity has no inverse to evaluate there.
      if (n > 2) {
        worst_tp = std::max(worst_tp, failure_map_trace_defect(sw.e0, sw.e1));
      }
    }
  }
  o.require(worst_trace <= 1e-8, "local trace " + fmt("%.3g", worst_trace));
  o.require(worst_tp <= 1e-8, "trace preservation " + fmt("%.3g", worst_tp));
  o.note("global_reduction=" + fmt("%.2e", worst_global) + " local_trace=" +
         fmt("%.2e", worst_trace) + " tp_defect=" + fmt("%.2e", worst_tp));
  return o;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

Outcome resampling_comparison() {
  Outcome o;
  const double eps = 0.1;
  const std::int64_t run_length = 64;
  std::vector<double> xs, lg, ll;
  for (int n = 2; n <= 5; ++n) {
    PauliHamiltonian h = build_heisenberg_chain(n);
    const Mat rho0 = maximally_mixed(h.dimension());
    double tau[2];
    int i = 0;
    for (ResamplingScope scope : {ResamplingScope::kGlobal, ResamplingScope::kLocal}) {
      SweepTransfer sw = sweep_transfer(h, AgspMode::kMixtureRandom, eps,
                                        Weighting::kUnit, scope, 1);
      tau[i++] = expected_tau_general(sw.e0, sw.e1, rho0, run_length);
    }
    o.require(tau[1] <= tau[0] * (1.0 + 1e-9), "local > global at n=" + std::to_string(n));
    o.note("n=" + std::to_string(n) + " " + fmt("%.2f", tau[0]) + "/" +
           fmt("%.2f", tau[1]) + ";");
    xs.push_back(n);
    lg.push_back(std::log(tau[0]));
    ll.push_back(std::log(tau[1]));
  }
  const double sg = fit_slope(xs, lg);
  const double sl = fit_slope(xs, ll);
  o.require(sl < sg, "local slope not smaller");
  o.note("slope_global=" + fmt("%.4f", sg) + " slope_local=" + fmt("%.4f", sl));
  return o;
}

Outcome fixed_point() {
  Outcome o;
  Rng rng(61);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const Index d = 4 + 4 * (trial % 2);
    const Index n = 1 + trial % 2;
    auto [k, pi] = random_agsp(d, n, 0.75, 0.95, 0.5, rng);
    AgspParams p = verify_agsp(k, pi);
    Mat direct = fixed_point_direct(k);
    Mat iterated = fixed_point_iterate(cptp_transfer(k));
    worst = std::max(worst, trace_distance(direct, iterated));
    // Block bounds on the unnormalized fixed point (1 - K^2)^{-1}.
    Mat x = (Mat::Identity(d, d) - k * k).inverse();
    Mat comp = Mat::Identity(d, d) - pi;
    RVec top = Eigen::SelfAdjointEigenSolver<Mat>(hermitian_part(pi * x * pi)).eigenvalues();
    RVec rest =
        Eigen::SelfAdjointEigenSolver<Mat>(hermitian_part(comp * x * comp)).eigenvalues();
    o.require(top.tail(n).minCoeff() >= 1.0 / (1.0 - p.gamma) - 1e-8,
              "top block at trial " + std::to_string(trial));
    o.require(rest.maxCoeff() <= 1.0 / (1.0 - p.delta) + 1e-8,
              "complement block at trial " + std::to_string(trial));
    const double bound = fixed_point_overlap_bound(p, double(d), double(n));
    o.require(overlap(pi, direct) >= bound - 1e-12,
              "overlap bound at trial " + std::to_string(trial));
  }
  o.require(worst <= 1e-8, "direct vs iterated " + fmt("%.3g", worst));
  o.note("max_trace_distance=" + fmt("%.2e", worst));
  return o;
}

double brute_force_rank(int n) {
  std::vector<std::vector<int>> perms, rel;
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 1);
  do {
    perms.push_back(p);
    std::vector<int> r;
    for (std::size_t k = 0; k < p.size(); ++k) {
      int v = 1;
      for (std::size_t j = 0; j < k; ++j) v += p[j] < p[k];
      r.push_back(v);
    }
    rel.push_back(r);
  } while (std::next_permutation(p.begin(), p.end()));
  std::function<double(const std::vector<int>&)> value =
      [&](const std::vector<int>& prefix) {
        const std::size_t k = prefix.size();
        double stop = 0.0;
        int matched = 0;
        std::vector<int> next(static_cast<std::size_t>(n) + 2, 0);
        for (std::size_t i = 0; i < perms.size(); ++i) {
          if (!std::equal(prefix.begin(), prefix.end(), rel[i].begin())) continue;
          ++matched;
          if (k > 0) stop += perms[i][k - 1];
          if (k < static_cast<std::size_t>(n)) ++next[static_cast<std::size_t>(rel[i][k])];
        }
        stop /= matched;
        if (k == static_cast<std::size_t>(n)) return stop;
        double cont = 0.0;
        for (std::size_t r = 1; r < next.size(); ++r) {
          if (next[r] == 0) continue;
          std::vector<int> longer = prefix;
          longer.push_back(static_cast<int>(r));
          cont += next[r] * value(longer);
        }
        cont /= matched;
        return k == 0 ? cont : std::min(stop, cont);
      };
  return value({});
}

double secretary_success_rate(double p_zero, std::int64_t horizon, int trials) {
  Rng rng(71);
  int successes = 0;
  for (int trial = 0; trial < trials; ++trial) {
    StoppingState s(StoppingRule::secretary(horizon), derive_seed(72, trial));
    std::vector<RunRecord> runs;
    std::int64_t stopped = -1;
    std::int64_t step = 0;
    for (; step < horizon; ++step) {
      const int bit = uniform01(rng) >= p_zero;
      const RunRecord before = s.history().current;
      Decision d = s.observe(bit);
      if (bit == 1) runs.push_back(before);
      if (d == Decision::kStop) {
        stopped = static_cast<std::int64_t>(runs.size());
        break;
      }
      if (d == Decision::kTruncated) break;
    }
    if (stopped < 0) continue;
    RunRecord current = s.history().current;
    for (++step; step < horizon; ++step) {
      if (uniform01(rng) >= p_zero) {
        runs.push_back(current);
        current = {0, uniform01(rng)};
      } else {
        ++current.length;
      }
    }
    runs.push_back(current);
    std::size_t best = 0;
    for (std::size_t i = 1; i < runs.size(); ++i) {
      if (ranks_above(runs[i], runs[best])) best = i;
    }
    successes += static_cast<std::int64_t>(best) == stopped;
  }
  return successes / double(trials);
}

Outcome optimal_stopping() {
  Outcome o;
  for (int n = 1; n <= 6; ++n) {
    const double oracle = brute_force_rank(n);
    const double c0 = chow_thresholds(n).expected_rank();
    o.require(std::abs(c0 - oracle) <= 1e-12, "Chow n=" + std::to_string(n));
  }
  double c25 = 0.0;
  for (int n = 1; n <= 25; ++n) {
    c25 = chow_thresholds(n).expected_rank();
    o.require(c25 <= 3.8695, "limit at n=" + std::to_string(n));
  }
  const double rate = secretary_success_rate(0.5, 1000, 20000);
  o.require(rate >= 0.30 && rate <= 0.44, "secretary rate " + fmt("%.4f", rate));
  o.note("c0(25)=" + fmt("%.6f", c25) + " secretary_rate=" + fmt("%.4f", rate));
  return o;
}

Outcome decaying_schedule() {
  Outcome o;
  System sys(build_heisenberg_chain(2));
  const double eps = suggest_epsilon(sys.hamiltonian);
  const Mat& pi0 = sys.spectral.ground_projector;
  double previous = -1.0;
  double last = 0.0;
  for (std::int64_t n : {2, 4, 6, 8}) {
    const double exact = overlap(
        pi0, expected_state_decaying(sys.hamiltonian, eps, Weighting::kNormalized, n));
    RunConfig cfg;
    cfg.mode = AgspMode::kProductSweep;
    cfg.weighting = Weighting::kNormalized;
    cfg.schedule = EpsilonSchedule::decaying(eps);
    cfg.resampling = ResamplingScope::kGlobal;
    cfg.rule = StoppingRule::first_run_of_zeros(n);
    cfg.seed = 800 + static_cast<std::uint64_t>(n);
    EnsembleStats st = run_ensemble(sys, cfg, 10000, 1).stats;
    const double z = zscore(st.mean_overlap, exact, st.stderr_overlap);
    o.require(std::abs(z) <= 3.0, "Monte Carlo z at n=" + std::to_string(n));
    o.require(exact >= previous - 1e-12, "decrease at n=" + std::to_string(n));
    o.note("n=" + std::to_string(n) + " exact=" + fmt("%.4f", exact) +
           " mc=" + fmt("%.4f", st.mean_overlap) + " z=" + fmt("%.2f", z) + ";");
    previous = exact;
    last = exact;
  }
  o.require(last > 0.9, "overlap at n=8 is " + fmt("%.4f", last));
  return o;
}

Outcome circuit_consistency() {
  Outcome o;
  PauliHamiltonian h = build_heisenberg_chain(4);
  Rng rng(91);
  double worst_stat = 0.0;
  double worst_unitary = 0.0;
  for (Weighting w : {Weighting::kNormalized, Weighting::kUnit}) {
    std::vector<LocalFactor> factors = pauli_factors(h, w);
    for (std::size_t i = 0; i < factors.size(); ++i) {
      for (double eps : {0.05, 0.2, 1.0}) {
        Instrument inst = make_weak_instrument(factors[i], eps, 4, Resampler::global(4));
        Circuit c = measurement_circuit(h, i, eps, w);
        Mat u = circuit_unitary(c);
        worst_unitary = std::max(
            worst_unitary, (u.adjoint() * u - Mat::Identity(u.rows(), u.cols())).norm());
        Mat pi = embed(factors[i].factor, factors[i].support, 4);
        Mat dil = dilation_unitary(factors[i].weight, eps, pi);
        worst_unitary = std::max(
            worst_unitary,
            (dil.adjoint() * dil - Mat::Identity(dil.rows(), dil.cols())).norm());
        Mat e0 = embed(inst.e0(), inst.support, 4);
        Mat e1 = embed(inst.e1(), inst.support, 4);
        for (int s = 0; s < 3; ++s) {
          Vec psi = random_state(16, rng);
          AncillaBranches b = simulate_measurement(c, psi);
          const Vec branch[2] = {e0 * psi, e1 * psi};
          for (int k = 0; k < 2; ++k) {
            const double p = branch[k].squaredNorm();
            worst_stat = std::max(worst_stat, std::abs(b.probability[k] - p));
            if (p > 1e-12) {
              Vec expect = branch[k] / std::sqrt(p);
              worst_stat = std::max(
                  worst_stat, (b.state[k] * b.state[k].adjoint() -
                               expect * expect.adjoint()).norm());
            }
          }
        }
      }
    }
  }
  o.require(worst_stat <= 1e-10, "statistics " + fmt("%.3g", worst_stat));
  o.require(worst_unitary <= 1e-12, "unitarity " + fmt("%.3g", worst_unitary));
  o.note("max_branch_error=" + fmt("%.2e", worst_stat) +
         " max_unitarity_error=" + fmt("%.2e", worst_unitary));
  return o;
}

Outcome fault_resilience() {
  Outcome o;
  System sys(build_heisenberg_chain(5));
  const double dim = double(sys.spectral.dimension);
  const double deg = double(sys.spectral.degeneracy);
  RunConfig cfg;
  cfg.mode = AgspMode::kProductSweep;
  cfg.weighting = Weighting::kUnit;
  cfg.schedule = EpsilonSchedule::constant(0.1);
  cfg.resampling = ResamplingScope::kGlobal;
  cfg.rule = StoppingRule::secretary(1);
  cfg.seed = 1001;
  const std::vector<std::int64_t> caps = {2500, 10000};
  ResilienceReport rep = run_resilience_experiment(
      sys, cfg, NoiseModel::depolarizing(1e-4, 1e-4), caps, 400, 1, false);
  const EnsembleStats& a = rep.stats[0];
  const EnsembleStats& b = rep.stats[1];
  const double sigma = std::hypot(a.stderr_overlap, b.stderr_overlap);
  const double allowed = std::max(3.0 * sigma, 0.01);
  const double spread = std::abs(b.mean_overlap - a.mean_overlap);
  o.require(spread < allowed, "overlap spread " + fmt("%.4f", spread) +
                                  " >= " + fmt("%.4f", allowed));
  o.note("overlap(2500)=" + fmt("%.4f", a.mean_overlap) + "+-" +
         fmt("%.4f", a.stderr_overlap) + " overlap(10000)=" +
         fmt("%.4f", b.mean_overlap) + "+-" + fmt("%.4f", b.stderr_overlap) + ";");

  std::vector<double> decay = free_decay_overlaps(sys, 1e-4, caps.back());
  bool monotone = true;
  for (std::size_t t = 1; t < decay.size(); ++t) monotone &= decay[t] <= decay[t - 1] + 1e-15;
  const double floor = deg / dim;
  o.require(monotone, "free decay not monotone");
  o.require(decay.back() >= floor - 1e-12 && decay.back() < decay.front(),
            "free decay does not approach N/D");
  o.note("free_decay: " + fmt("%.4f", decay.front()) + " -> " +
         fmt("%.4f", decay[static_cast<std::size_t>(caps.front())]) + " -> " +
         fmt("%.4f", decay.back()) + " (N/D=" + fmt("%.4f", floor) + ");");

  Rng rng(1002);
  double min_margin = INFINITY;
  for (int trial = 0; trial < 5; ++trial) {
    auto [k, pi] = random_agsp(32, 1, 0.9999, 0.9999, 0.5, rng);
    AgspParams p = verify_agsp(k, pi);
    for (double delta : {1e-3, 1e-2}) {
      TransferMatrix tp = perturb_channel(cptp_transfer(k), delta, rng);
      const double ov = overlap(pi, fixed_point_solve(tp));
      const double bound = fixed_point_resilience_bound(p, delta, 32.0, 1.0);
      min_margin = std::min(min_margin, ov - bound);
      o.require(ov >= bound - 1e-12, "fixed-point bound at delta=" + fmt("%g", delta));
    }
  }
  Mat kc = chebyshev_fixed_point_operator(sys.spectral, 6);
  AgspParams pc = verify_agsp(kc, sys.spectral.ground_projector);
  for (double delta : {1e-3, 1e-2}) {
    TransferMatrix tp = perturb_channel(cptp_transfer(kc), delta, rng);
    const double ov = overlap(sys.spectral.ground_projector, fixed_point_solve(tp));
    const double bound = fixed_point_resilience_bound(pc, delta, dim, deg);
    o.require(ov >= bound - 1e-12, "Chebyshev fixed-point bound at delta=" + fmt("%g", delta));
    min_margin = std::min(min_margin, ov - bound);
  }
  o.note("fixed_point_min_margin=" + fmt("%.4f", min_margin));
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "linear AGSP parameters", 1.0, linear_agsp_parameters},
      {2, "stopped-state oracle", 300.0, stopped_state_oracle},
      {3, "projector run-time", 1.0, projector_run_time},
      {4, "general resampling formulas", 60.0, general_resampling},
      {5, "resampling comparison", 600.0, resampling_comparison},
      {6, "fixed point", 60.0, fixed_point},
      {7, "optimal stopping", 120.0, optimal_stopping},
      {8, "decaying schedule", 300.0, decaying_schedule},
      {9, "circuit consistency", 60.0, circuit_consistency},
      {10, "fault resilience", 900.0, fault_resilience},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(secs < c.budget_s, "runtime over " + fmt("%.0f s", c.budget_s));
    failures += !o.pass;
    std::printf("%s criterion %d (%s) [%.1f s]: %s\n", o.pass ? "PASS" : "FAIL",
                c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
