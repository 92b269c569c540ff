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


#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dqe/agsp.hpp"
#include "dqe/analytics.hpp"
#include "dqe/circuits.hpp"
#include "dqe/instrument.hpp"
#include "dqe/noise.hpp"
#include "dqe/stopping.hpp"
#include "dqe/trajectory.hpp"
#include "dqe_cli.hpp"

namespace dqe::cli {

using nlohmann::json;

namespace {

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string hex64(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

json command_defaults(const std::string& command) {
  json d = {
      {"system", {{"builder", "heisenberg"}, {"n", 2}}},
      {"agsp", "product"},
      {"schedule", "constant"},
      {"weighting", "normalized"},
      {"resampler", "global"},
      {"stopping", "run-of-zeros:4"},
      {"trajectories", 1000},
      {"seed", 1},
      {"threads", 0},
      {"max_steps", 1000000},
      {"mixture_steps", 0},
      {"output", "-"},
  };
  if (command == "analytics") d["n_max"] = 8;
  if (command == "fixed-point") d["ell"] = 4;
  if (command == "compare-resampling") {
    d["agsp"] = "mixture";
    d["weighting"] = "unit";
    d["eps"] = 0.1;
    d["mixture_steps"] = 1;
    d["run_length"] = 64;
    d["max_n"] = 5;
    d["mc_trajectories"] = 0;
  }
  if (command == "noise-sweep") {
    d["system"] = {{"builder", "heisenberg"}, {"n", 5}};
    d["weighting"] = "unit";
    d["eps"] = 0.1;
    d["stopping"] = "secretary:1";
    d["trajectories"] = 200;
    d["runtimes"] = {200, 800};
    d["deltas"] = {1e-3, 1e-2};
    d["depolarizing"] = {1e-4};
  }
  if (command == "circuit") {
    d["term_index"] = 0;
    d["full_sweep"] = false;
  }
  return d;
}

/// Effective experiment settings decoded from the merged config.
struct Experiment {
  json config;
  std::unique_ptr<System> system;
  double eps = 0.0;
  std::string agsp;
  RunConfig run;
  std::int64_t trajectories = 1;
  int threads = 0;
};

RunConfig run_config_of(const json& c, const std::string& agsp, double eps) {
  RunConfig r;
  if (agsp == "chebyshev") {
    fail(ErrorKind::kConfig,
         "field 'agsp': chebyshev is analytic only (analytics, fixed-point)");
  }
  r.mode = parse_agsp_mode(agsp);
  r.weighting = parse_weighting(c["weighting"].get<std::string>());
  const std::string sched = c["schedule"].get<std::string>();
  if (sched == "constant") {
    r.schedule = EpsilonSchedule::constant(eps);
  } else if (sched == "decaying") {
    r.schedule = EpsilonSchedule::decaying(eps);
  } else {
    fail(ErrorKind::kConfig, "field 'schedule': expected constant|decaying");
  }
  r.resampling = parse_resampling(c["resampler"].get<std::string>());
  r.rule = StoppingRule::parse(c["stopping"].get<std::string>());
  r.seed = c["seed"].get<std::uint64_t>();
  r.max_steps = c["max_steps"].get<std::int64_t>();
  r.mixture_steps = c["mixture_steps"].get<int>();
  return r;
}

Experiment make_experiment(json config) {
  validate_config(config);
  Experiment ex;
  ex.system = std::make_unique<System>(build_system(config["system"]));
  if (!config.contains("eps") || config["eps"].is_null()) {
    config["eps"] = suggest_epsilon(ex.system->hamiltonian);
  }
  ex.eps = config["eps"].get<double>();
  ex.agsp = config["agsp"].get<std::string>();
  ex.trajectories = config["trajectories"].get<std::int64_t>();
  ex.threads = config["threads"].get<int>();
  ex.config = std::move(config);
  return ex;
}

/// Output sink: stdout or a file named by the config.
class Sink {
 public:
  Sink(const json& config, std::ostream& fallback) : out_(&fallback) {
    const std::string path = config["output"].get<std::string>();
    if (path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) fail(ErrorKind::kConfig, "cannot write '" + path + "'");
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

void write_header(std::ostream& os, const json& config, const char* prefix) {
  os << prefix << " dqe " << kVersion << "\n";
  os << prefix << " command: " << config["command"].get<std::string>() << "\n";
  os << prefix << " config_hash: " << hex64(config_hash(config)) << "\n";
  // Execution-only keys stay out so output does not depend on them.
  json recorded = config;
  recorded.erase("threads");
  recorded.erase("output");
  os << prefix << " config: " << recorded.dump() << "\n";
}

Mat maximally_mixed(Index dim) {
  return identity(dim) / static_cast<double>(dim);
}

/// Exact E(overlap) and E(tau) for a first-run-of-zeros rule.
struct Oracle {
  bool available = false;
  double overlap = 0.0;
  double tau = 0.0;
  std::string note;
};

Oracle compute_oracle(const Experiment& ex) {
  Oracle o;
  const RunConfig& r = ex.run;
  if (r.rule.kind != StopKind::kFirstRunOfZeros || r.rule.time_cap != 0 ||
      r.schedule.kind != ScheduleKind::kConstant) {
    o.note = "needs run-of-zeros without cap and a constant schedule";
    return o;
  }
  const System& s = *ex.system;
  const std::int64_t n = r.rule.n;
  try {
    if (r.resampling == ResamplingScope::kGlobal &&
        r.mode != AgspMode::kMixtureRandom) {
      Mat k = r.mode == AgspMode::kLinearGlobal
                  ? agsp_linear(s.hamiltonian, s.spectral).op
                  : agsp_product(s.hamiltonian, ex.eps, r.weighting).op;
      o.overlap = expected_overlap_global(k, s.spectral.ground_projector, n);
      o.tau = expected_tau_global(k, n);
    } else {
      SweepTransfer st = sweep_transfer(s.hamiltonian, r.mode, ex.eps,
                                        r.weighting, r.resampling,
                                        r.mixture_steps);
      GeneralExpectation g = expected_general(
          st.e0, st.e1, maximally_mixed(s.hamiltonian.dimension()), n);
      o.overlap = (s.spectral.ground_projector * g.state).trace().real();
      o.tau = g.tau;
    }
    o.available = true;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kResourceLimit) throw;
    o.note = e.what();
  }
  return o;
}

double zscore(double mean, double exact, double err) {
  if (err <= 0.0) return mean == exact ? 0.0 : INFINITY;
  return (mean - exact) / err;
}

int cmd_spectrum(Experiment& ex, std::ostream& out) {
  const System& s = *ex.system;
  const PauliHamiltonian& h = s.hamiltonian;
  Sink sink(ex.config, out);
  std::ostream& os = sink.stream();
  write_header(os, ex.config, "#");
  os << "quantity,value\n";
  os << "num_qubits," << h.num_qubits() << "\n";
  os << "num_terms," << h.num_terms() << "\n";
  os << "lambda0," << num(s.spectral.lambda0) << "\n";
  os << "lambda1," << num(s.spectral.lambda1) << "\n";
  os << "gap," << num(s.spectral.gap) << "\n";
  os << "degeneracy," << s.spectral.degeneracy << "\n";
  os << "dimension," << s.spectral.dimension << "\n";
  os << "kappa," << num(h.kappa()) << "\n";
  os << "norm," << num(s.spectral.norm) << "\n";
  os << "suggested_eps," << num(suggest_epsilon(h)) << "\n";
  return kExitOk;
}

int cmd_run(Experiment& ex, std::ostream& out, std::ostream& err) {
  ex.run = run_config_of(ex.config, ex.agsp, ex.eps);
  ex.run.record_series = true;
  TrajectoryRecord rec = run_trajectory(*ex.system, ex.run);
  Sink sink(ex.config, out);
  std::ostream& os = sink.stream();
  write_header(os, ex.config, "#");
  os << "step,outcome,energy,overlap,failing_term\n";
  for (std::size_t i = 0; i < rec.outcomes.size(); ++i) {
    os << (i + 1) << "," << int(rec.outcomes[i]) << ","
       << num(rec.energy_series[i]) << "," << num(rec.overlap_series[i]) << ","
       << rec.failing_term[i] << "\n";
  }
  err << "stop_step=" << rec.stop_step
      << " stopped_run_length=" << rec.stopped_run_length
      << " final_energy=" << num(rec.final_energy)
      << " final_overlap=" << num(rec.final_overlap)
      << " truncated=" << (rec.truncated ? 1 : 0)
      << " lambda0=" << num(ex.system->spectral.lambda0) << "\n";
  return kExitOk;
}

int cmd_ensemble(Experiment& ex, std::ostream& out, std::ostream& err) {
  ex.run = run_config_of(ex.config, ex.agsp, ex.eps);
  EnsembleResult res =
      run_ensemble(*ex.system, ex.run, ex.trajectories, ex.threads);
  Oracle oracle = compute_oracle(ex);
  Sink sink(ex.config, out);
  std::ostream& os = sink.stream();
  write_header(os, ex.config, "#");
  os << "trajectory_id,stop_step,stopped_run_length,final_energy,"
        "final_overlap,truncated\n";
  for (const TrajectorySummary& r : res.rows) {
    os << r.id << "," << r.stop_step << "," << r.stopped_run_length << ","
       << num(r.final_energy) << "," << num(r.final_overlap) << ","
       << (r.truncated ? 1 : 0) << "\n";
  }
  const EnsembleStats& st = res.stats;
  std::ostringstream summary;
  summary << "mean_overlap: " << num(st.mean_overlap) << " +- "
          << num(st.stderr_overlap) << "\n";
  summary << "mean_stop_step: " << num(st.mean_stop_step) << " +- "
          << num(st.stderr_stop_step) << "\n";
  summary << "mean_energy: " << num(st.mean_energy) << " +- "
          << num(st.stderr_energy) << "\n";
  summary << "truncated: " << st.truncated << "\n";
  if (oracle.available) {
    summary << "exact_overlap: " << num(oracle.overlap) << " z="
            << num(zscore(st.mean_overlap, oracle.overlap, st.stderr_overlap))
            << "\n";
    summary << "exact_tau: " << num(oracle.tau) << " z="
            << num(zscore(st.mean_stop_step, oracle.tau, st.stderr_stop_step))
            << "\n";
  } else {
    summary << "oracle: unavailable (" << oracle.note << ")\n";
  }
  std::istringstream lines(summary.str());
  for (std::string line; std::getline(lines, line);) {
    os << "# " << line << "\n";
    err << line << "\n";
  }
  return kExitOk;
}

/// Operator for the analytic commands.
Agsp analytic_agsp(const Experiment& ex) {
  const System& s = *ex.system;
  const std::string& a = ex.agsp;
  Weighting w = parse_weighting(ex.config["weighting"].get<std::string>());
  if (a == "linear") return agsp_linear(s.hamiltonian, s.spectral);
  if (a == "product" || a == "mixture") {
    return agsp_product(s.hamiltonian, ex.eps, w);
  }
  if (a == "chebyshev") {
    return agsp_chebyshev(s.spectral, ex.config["ell"].get<int>());
  }
  fail(ErrorKind::kConfig, "field 'agsp': unknown mode '" + a + "'");
}

int cmd_analytics(Experiment& ex, std::ostream& out) {
  const System& s = *ex.system;
  if (!ex.config.contains("ell")) ex.config["ell"] = 4;
  Agsp k = analytic_agsp(ex);
  AgspParams p = verify_agsp(k.op, s.spectral.ground_projector);
  const bool global =
      ex.config["resampler"].get<std::string>() == "global";
  const bool closed = global && ex.agsp != "mixture";
  SweepTransfer st;
  if (!closed) {
    Weighting w = parse_weighting(ex.config["weighting"].get<std::string>());
    st = sweep_transfer(s.hamiltonian, parse_agsp_mode(ex.agsp), ex.eps, w,
                        parse_resampling(ex.config["resampler"].get<std::string>()),
                        ex.config["mixture_steps"].get<int>());
  }
  const double dim = static_cast<double>(s.spectral.dimension);
  const double deg = static_cast<double>(s.spectral.degeneracy);
  Sink sink(ex.config, out);
  std::ostream& os = sink.stream();
  write_header(os, ex.config, "#");
  os << "# sqrt_gamma: " << num(p.sqrt_gamma())
     << " sqrt_delta: " << num(p.sqrt_delta()) << "\n";
  os << "n,overlap_exact,tau_exact,overlap_bound,bound_vacuous,tau_bound\n";
  const auto n_max = ex.config["n_max"].get<std::int64_t>();
  for (std::int64_t n = 1; n <= n_max; ++n) {
    double overlap = 0.0;
    double tau = 0.0;
    if (closed) {
      overlap = expected_overlap_global(k.op, s.spectral.ground_projector, n);
      tau = expected_tau_global(k.op, n);
    } else {
      GeneralExpectation g = expected_general(
          st.e0, st.e1, maximally_mixed(s.hamiltonian.dimension()), n);
      overlap = (s.spectral.ground_projector * g.state).trace().real();
      tau = g.tau;
    }
    os << n << "," << num(overlap) << "," << num(tau) << ",";
    if (global) {
      BoundValue b = overlap_lower_bound(p, dim, deg, n);
      os << num(b.value) << "," << (b.vacuous ? 1 : 0) << ","
         << num(expected_tau_bound(p, dim, deg, n)) << "\n";
    } else {
      os << "nan,1,nan\n";
    }
  }
  return kExitOk;
}

int cmd_fixed_point(Experiment& ex, std::ostream& out) {
  const System& s = *ex.system;
  if (ex.agsp == "mixture") {
    fail(ErrorKind::kConfig, "field 'agsp': fixed-point needs one operator");
  }
  Agsp k = analytic_agsp(ex);
  if (ex.agsp == "chebyshev") {
    // The filter peaks at 1 on the ground space; use the scaled operator.
    k.op = chebyshev_fixed_point_operator(s.spectral,
                                          ex.config["ell"].get<int>());
  }
  const Mat& pi0 = s.spectral.ground_projector;
  AgspParams p = verify_agsp(k.op, pi0);
  TransferMatrix t = cptp_transfer(k.op);
  Mat direct = fixed_point_direct(k.op);
  Mat iterated = fixed_point_iterate(t);
  const double dim = static_cast<double>(s.spectral.dimension);
  const double deg = static_cast<double>(s.spectral.degeneracy);
  Sink sink(ex.config, out);
  std::ostream& os = sink.stream();
  write_header(os, ex.config, "#");
  os << "quantity,value\n";
  os << "sqrt_gamma," << num(p.sqrt_gamma()) << "\n";
  os << "sqrt_delta," << num(p.sqrt_delta()) << "\n";
  os << "overlap_direct," << num((pi0 * direct).trace().real()) << "\n";
  os << "overlap_iterated," << num((pi0 * iterated).trace().real()) << "\n";
  os << "trace_distance," << num(trace_distance(direct, iterated)) << "\n";
  os << "overlap_bound," << num(fixed_point_overlap_bound(p, dim, deg)) << "\n";
  if (ex.agsp == "chebyshev") {
    const int ell = ex.config["ell"].get<int>();
    BoundValue b = chebyshev_fixed_point_bound(s.spectral, ell);
    os << "chebyshev_bound," << num(b.value) << "\n";
    os << "chebyshev_bound_vacuous," << (b.vacuous ? 1 : 0) << "\n";
  }
  return kExitOk;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int cmd_compare(Experiment& ex, std::ostream& out, std::ostream& err) {
  if (ex.config["system"].value("builder", "") != "heisenberg") {
    fail(ErrorKind::kConfig,
         "field 'system.builder': compare-resampling sweeps Heisenberg chains");
  }
  const AgspMode mode = parse_agsp_mode(ex.agsp);
  const Weighting w =
      parse_weighting(ex.config["weighting"].get<std::string>());
  const auto run_length = ex.config["run_length"].get<std::int64_t>();
  const auto max_n = ex.config["max_n"].get<int>();
  const int micro = ex.config["mixture_steps"].get<int>();
  const auto mc = ex.config["mc_trajectories"].get<std::int64_t>();
  std::vector<double> xs, lg, ll;
  Sink sink(ex.config, out);
  std::ostream& os = sink.stream();
  write_header(os, ex.config, "#");
  os << "n,tau_global,tau_local\n";
  for (int n = 2; n <= max_n; ++n) {
    PauliHamiltonian h = build_heisenberg_chain(n);
    const Mat rho0 = maximally_mixed(h.dimension());
    double tau[2];
    const ResamplingScope scopes[2] = {ResamplingScope::kGlobal,
                                       ResamplingScope::kLocal};
    for (int i = 0; i < 2; ++i) {
      SweepTransfer st = sweep_transfer(h, mode, ex.eps, w, scopes[i], micro);
      tau[i] = expected_tau_general(st.e0, st.e1, rho0, run_length);
    }
    os << n << "," << num(tau[0]) << "," << num(tau[1]) << "\n";
    xs.push_back(n);
    lg.push_back(std::log(tau[0]));
    ll.push_back(std::log(tau[1]));
    if (n == 2 && mc > 0) {
      System sys(h);
      for (int i = 0; i < 2; ++i) {
        RunConfig r;
        r.mode = mode;
        r.weighting = w;
        r.schedule = EpsilonSchedule::constant(ex.eps);
        r.resampling = scopes[i];
        r.rule = StoppingRule::first_run_of_zeros(run_length);
        r.seed = derive_seed(ex.config["seed"].get<std::uint64_t>(), i);
        r.mixture_steps = micro;
        EnsembleStats s = run_ensemble(sys, r, mc, ex.threads).stats;
        std::string line = std::string("mc_n2_") + to_string(scopes[i]) +
                           ": " + num(s.mean_stop_step) + " +- " +
                           num(s.stderr_stop_step) + " z=" +
                           num(zscore(s.mean_stop_step, tau[i],
                                      s.stderr_stop_step));
        os << "# " << line << "\n";
        err << line << "\n";
      }
    }
  }
  if (xs.size() >= 2) {
    const double mg = fit_slope(xs, lg);
    const double ml = fit_slope(xs, ll);
    os << "# slope_global: " << num(mg) << "\n";
    os << "# slope_local: " << num(ml) << "\n";
    err << "slope_global=" << num(mg) << " slope_local=" << num(ml) << "\n";
  }
  return kExitOk;
}

int cmd_noise(Experiment& ex, std::ostream& out, std::ostream& err) {
  ex.run = run_config_of(ex.config, ex.agsp, ex.eps);
  std::vector<std::int64_t> runtimes =
      ex.config["runtimes"].get<std::vector<std::int64_t>>();
  struct Cell {
    NoiseModel model;
    double nominal;
  };
  std::vector<Cell> cells;
  const std::uint64_t seed = ex.config["seed"].get<std::uint64_t>();
  for (double d : ex.config["deltas"].get<std::vector<double>>()) {
    cells.push_back({NoiseModel::perturbation(d, seed), d});
  }
  for (double p : ex.config["depolarizing"].get<std::vector<double>>()) {
    cells.push_back({NoiseModel::depolarizing(p, p), p});
  }
  const double dim = static_cast<double>(ex.system->spectral.dimension);
  const double deg = static_cast<double>(ex.system->spectral.degeneracy);
  Sink sink(ex.config, out);
  std::ostream& os = sink.stream();
  write_header(os, ex.config, "#");
  os << "noise,delta,p,delta_sweep,runtime_cap,mean_overlap,stderr,bound,"
        "bound_vacuous,fixed_point_bound,free_decay\n";
  for (const Cell& c : cells) {
    c.model.validate();
    ResilienceReport rep = run_resilience_experiment(
        *ex.system, ex.run, c.model, runtimes, ex.trajectories, ex.threads);
    const bool depol = c.model.kind == NoiseKind::kDepolarizingPerGate;
    const double fp =
        rep.delta_measured >= 0.0
            ? fixed_point_resilience_bound(rep.clean_params, rep.delta_measured,
                                           dim, deg)
            : NAN;
    for (std::size_t i = 0; i < runtimes.size(); ++i) {
      os << (depol ? "depolarizing" : "perturbation") << ","
         << (depol ? "nan" : num(c.nominal)) << ","
         << (depol ? num(c.nominal) : "nan") << ","
         << num(rep.delta_measured) << "," << runtimes[i] << ","
         << num(rep.stats[i].mean_overlap) << ","
         << num(rep.stats[i].stderr_overlap) << ","
         << num(rep.asymptotic_bound.value) << ","
         << (rep.asymptotic_bound.vacuous ? 1 : 0) << "," << num(fp) << ","
         << num(rep.free_decay[i]) << "\n";
    }
    err << (depol ? "depolarizing " : "perturbation ") << num(c.nominal)
        << ": spread=" << num(rep.spread) << "\n";
  }
  return kExitOk;
}

int cmd_circuit(Experiment& ex, std::ostream& out) {
  const PauliHamiltonian& h = ex.system->hamiltonian;
  Weighting w = parse_weighting(ex.config["weighting"].get<std::string>());
  Circuit c;
  if (ex.config["full_sweep"].get<bool>()) {
    c = schedule_sweep(h, ex.eps, w).circuit;
  } else {
    const auto idx = ex.config["term_index"].get<std::size_t>();
    if (idx >= h.num_terms()) {
      fail(ErrorKind::kConfig, "field 'term_index': out of range");
    }
    c = measurement_circuit(h, idx, ex.eps, w);
  }
  Sink sink(ex.config, out);
  std::ostream& os = sink.stream();
  std::string qasm = export_qasm(c);
  // Keep the version line first, then provenance comments.
  const std::size_t eol = qasm.find('\n');
  os << qasm.substr(0, eol + 1);
  write_header(os, ex.config, "//");
  os << qasm.substr(eol + 1);
  return kExitOk;
}

/// Flags shared by all subcommands. Only flags given on the command line
/// override the config file.
struct Flags {
  std::string config_path;
  std::string system;
  std::string hamiltonian;
  std::string agsp, schedule, weighting, resampler, stopping, output;
  double eps = 0.0;
  long long trajectories = 0, seed = 0, threads = 0, max_steps = 0;
  long long mixture_steps = 0, n_max = 0, ell = 0, max_n = 0, run_length = 0;
  long long term_index = 0, mc_trajectories = 0;
  std::vector<double> deltas, depolarizing;
  std::vector<long long> runtimes;
  bool full_sweep = false;
  std::vector<std::pair<std::string, CLI::Option*>> options;
};

void add_flags(CLI::App* sub, Flags& f) {
  auto reg = [&](const char* key, CLI::Option* o) {
    f.options.emplace_back(key, o);
  };
  sub->add_option("--config", f.config_path, "JSON experiment config");
  reg("system", sub->add_option("--system", f.system,
                                "heisenberg:N[:periodic] | z | file:PATH"));
  reg("hamiltonian",
      sub->add_option("--hamiltonian", f.hamiltonian, "Hamiltonian JSON file"));
  reg("agsp", sub->add_option("--agsp", f.agsp,
                              "linear | product | mixture | chebyshev"));
  reg("eps", sub->add_option("--eps", f.eps, "weak measurement strength"));
  reg("schedule", sub->add_option("--schedule", f.schedule,
                                  "constant | decaying"));
  reg("weighting", sub->add_option("--weighting", f.weighting,
                                   "normalized | unit"));
  reg("resampler", sub->add_option("--resampler", f.resampler,
                                   "global | local"));
  reg("stopping",
      sub->add_option("--stop", f.stopping,
                      "run-of-zeros:N | secretary:T | expected-rank:T"
                      " [,cap:N]"));
  reg("trajectories", sub->add_option("--trajectories", f.trajectories));
  reg("seed", sub->add_option("--seed", f.seed));
  reg("threads",
      sub->add_option("--threads", f.threads, "worker count, 0 = all cores"));
  reg("max_steps", sub->add_option("--max-steps", f.max_steps));
  reg("mixture_steps",
      sub->add_option("--mixture-steps", f.mixture_steps,
                      "micro-steps per mixture step, 0 = 2m"));
  reg("output", sub->add_option("-o,--output", f.output, "file or - for stdout"));
  reg("n_max", sub->add_option("--n-max", f.n_max, "largest run length"));
  reg("ell", sub->add_option("--ell", f.ell, "Chebyshev degree"));
  reg("max_n", sub->add_option("--max-n", f.max_n, "largest chain length"));
  reg("run_length", sub->add_option("--run-length", f.run_length));
  reg("mc_trajectories",
      sub->add_option("--mc-trajectories", f.mc_trajectories,
                      "Monte Carlo check at n = 2, 0 = off"));
  reg("deltas", sub->add_option("--deltas", f.deltas)->delimiter(','));
  reg("depolarizing",
      sub->add_option("--depolarizing", f.depolarizing)->delimiter(','));
  reg("runtimes", sub->add_option("--runtimes", f.runtimes)->delimiter(','));
  reg("term_index", sub->add_option("--term-index", f.term_index));
  reg("full_sweep", sub->add_flag("--full-sweep", f.full_sweep));
}

json system_from_flag(const std::string& text) {
  if (text == "z") return {{"builder", "z"}};
  if (text.rfind("file:", 0) == 0) {
    return {{"builder", "file"}, {"path", text.substr(5)}};
  }
  if (text.rfind("heisenberg:", 0) == 0) {
    std::string rest = text.substr(11);
    bool periodic = false;
    const std::size_t colon = rest.find(':');
    if (colon != std::string::npos) {
      if (rest.substr(colon + 1) != "periodic") {
        fail(ErrorKind::kConfig, "--system: unknown suffix in '" + text + "'");
      }
      periodic = true;
      rest = rest.substr(0, colon);
    }
    try {
      std::size_t used = 0;
      int n = std::stoi(rest, &used);
      if (used != rest.size()) throw std::invalid_argument(rest);
      return {{"builder", "heisenberg"}, {"n", n}, {"periodic", periodic}};
    } catch (const std::logic_error&) {
      fail(ErrorKind::kConfig, "--system: bad chain length in '" + text + "'");
    }
  }
  fail(ErrorKind::kConfig, "--system: expected heisenberg:N[:periodic], z or "
                           "file:PATH, got '" + text + "'");
}

json merged_config(const std::string& command, const Flags& f) {
  json config = command_defaults(command);
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path, std::ios::binary);
    if (!in) fail(ErrorKind::kConfig, "cannot open '" + f.config_path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    json file = parse_json_text(ss.str(), f.config_path);
    if (!file.is_object()) {
      fail(ErrorKind::kConfig, f.config_path + ": expected a JSON object");
    }
    for (auto it = file.begin(); it != file.end(); ++it) {
      config[it.key()] = it.value();
    }
  }
  for (const auto& [key, opt] : f.options) {
    if (opt->count() == 0) continue;
    if (key == "system") {
      config["system"] = system_from_flag(f.system);
    } else if (key == "hamiltonian") {
      config["system"] = {{"builder", "file"}, {"path", f.hamiltonian}};
    } else if (key == "agsp") {
      config[key] = f.agsp;
    } else if (key == "eps") {
      config[key] = f.eps;
    } else if (key == "schedule") {
      config[key] = f.schedule;
    } else if (key == "weighting") {
      config[key] = f.weighting;
    } else if (key == "resampler") {
      config[key] = f.resampler;
    } else if (key == "stopping") {
      config[key] = f.stopping;
    } else if (key == "output") {
      config[key] = f.output;
    } else if (key == "trajectories") {
      config[key] = f.trajectories;
    } else if (key == "seed") {
      config[key] = f.seed;
    } else if (key == "threads") {
      config[key] = f.threads;
    } else if (key == "max_steps") {
      config[key] = f.max_steps;
    } else if (key == "mixture_steps") {
      config[key] = f.mixture_steps;
    } else if (key == "n_max") {
      config[key] = f.n_max;
    } else if (key == "ell") {
      config[key] = f.ell;
    } else if (key == "max_n") {
      config[key] = f.max_n;
    } else if (key == "run_length") {
      config[key] = f.run_length;
    } else if (key == "mc_trajectories") {
      config[key] = f.mc_trajectories;
    } else if (key == "deltas") {
      config[key] = f.deltas;
    } else if (key == "depolarizing") {
      config[key] = f.depolarizing;
    } else if (key == "runtimes") {
      config[key] = f.runtimes;
    } else if (key == "term_index") {
      config[key] = f.term_index;
    } else if (key == "full_sweep") {
      config[key] = f.full_sweep;
    }
  }
  config["command"] = command;
  return config;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"dqe: dissipative ground-state preparation experiments"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"spectrum", "exact spectral data and suggested epsilon"},
      {"run", "single trajectory, per-step CSV"},
      {"ensemble", "many trajectories, per-trajectory CSV and oracle z-scores"},
      {"analytics", "exact stopped overlap and run-time per run length"},
      {"fixed-point", "fixed point of the resampled channel"},
      {"compare-resampling", "exact run-time, global vs local resampling"},
      {"noise-sweep", "overlap under noise across run-time caps"},
      {"circuit", "OpenQASM for one term or a full sweep"},
  };
  std::vector<std::unique_ptr<Flags>> flags;
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    flags.push_back(std::make_unique<Flags>());
    add_flags(sub, *flags.back());
    subs.push_back(sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? kExitOk : kExitConfig;
  }
  try {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      const std::string& command = commands[i].first;
      Experiment ex = make_experiment(merged_config(command, *flags[i]));
      if (command == "spectrum") return cmd_spectrum(ex, out);
      if (command == "run") return cmd_run(ex, out, err);
      if (command == "ensemble") return cmd_ensemble(ex, out, err);
      if (command == "analytics") return cmd_analytics(ex, out);
      if (command == "fixed-point") return cmd_fixed_point(ex, out);
      if (command == "compare-resampling") return cmd_compare(ex, out, err);
      if (command == "noise-sweep") return cmd_noise(ex, out, err);
      if (command == "circuit") return cmd_circuit(ex, out);
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const json::exception& e) {
    err << "error (config): " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}

}  // namespace dqe::cli
