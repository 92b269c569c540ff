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


#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dqe_cli.hpp"

namespace dqe::cli {

using nlohmann::json;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
    case ErrorKind::kInvalidInstance:
    case ErrorKind::kDegenerateInstance:
    case ErrorKind::kParameter:
    case ErrorKind::kInvalidNoise:
      return kExitConfig;
    case ErrorKind::kResourceLimit:
      return kExitResource;
    case ErrorKind::kInvalidAgsp:
    case ErrorKind::kSingularFixedPoint:
    case ErrorKind::kConvergence:
    case ErrorKind::kIllConditioned:
    case ErrorKind::kInternalOrdering:
      return kExitNumerical;
  }
  return kExitNumerical;
}

json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Recompute line and column from the byte offset.
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t end = std::min(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail(ErrorKind::kConfig, source + ":" + std::to_string(line) + ":" +
                                 std::to_string(col) +
                                 ": JSON syntax error: " + e.what());
  }
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kConfig, "cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

[[noreturn]] void field_error(const std::string& path, const std::string& msg) {
  fail(ErrorKind::kConfig, "field '" + path + "': " + msg);
}

const json& require(const json& obj, const std::string& key,
                    const std::string& path) {
  if (!obj.is_object()) field_error(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) field_error(path + "." + key, "missing");
  return *it;
}

long long as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) field_error(path, "expected an integer");
  return v.get<long long>();
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) field_error(path, "expected a number");
  return v.get<double>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) field_error(path, "expected a string");
  return v.get<std::string>();
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& path) {
  if (!obj.is_object()) field_error(path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      field_error(path.empty() ? it.key() : path + "." + it.key(),
                  "unknown field");
    }
  }
}

}  // namespace

PauliHamiltonian hamiltonian_from_json(const json& j) {
  check_keys(j, {"num_qubits", "terms"}, "hamiltonian");
  long long n = as_int(require(j, "num_qubits", "hamiltonian"), "num_qubits");
  if (n < 1 || n > 62) field_error("num_qubits", "must be in [1, 62]");
  const json& terms = require(j, "terms", "hamiltonian");
  if (!terms.is_array()) field_error("terms", "expected an array");
  std::vector<PauliTerm> out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string p = "terms[" + std::to_string(i) + "]";
    check_keys(terms[i], {"coeff", "paulis"}, p);
    double c = as_number(require(terms[i], "coeff", p), p + ".coeff");
    std::string s = as_string(require(terms[i], "paulis", p), p + ".paulis");
    if (static_cast<long long>(s.size()) != n) {
      field_error(p + ".paulis", "length " + std::to_string(s.size()) +
                                     " != num_qubits " + std::to_string(n));
    }
    try {
      out.push_back({c, PauliString::parse(s)});
    } catch (const Error& e) {
      field_error(p + ".paulis", e.what());
    }
  }
  return PauliHamiltonian(static_cast<int>(n), std::move(out));
}

PauliHamiltonian load_hamiltonian_file(const std::string& path) {
  return hamiltonian_from_json(parse_json_text(read_file(path), path));
}

PauliHamiltonian build_system(const json& system) {
  check_keys(system, {"builder", "n", "periodic", "num_vars", "clauses", "path"},
             "system");
  const std::string builder =
      as_string(require(system, "builder", "system"), "system.builder");
  if (builder == "heisenberg") {
    long long n = as_int(require(system, "n", "system"), "system.n");
    bool periodic = false;
    if (system.contains("periodic")) {
      if (!system["periodic"].is_boolean()) {
        field_error("system.periodic", "expected a boolean");
      }
      periodic = system["periodic"].get<bool>();
    }
    if (n < 2) field_error("system.n", "must be >= 2");
    return build_heisenberg_chain(static_cast<int>(n), periodic);
  }
  if (builder == "z") {
    return PauliHamiltonian(1, {{1.0, PauliString::parse("Z")}});
  }
  if (builder == "maxsat") {
    long long nv =
        as_int(require(system, "num_vars", "system"), "system.num_vars");
    const json& cl = require(system, "clauses", "system");
    if (!cl.is_array()) field_error("system.clauses", "expected an array");
    std::vector<Clause> clauses;
    for (std::size_t i = 0; i < cl.size(); ++i) {
      const std::string p = "system.clauses[" + std::to_string(i) + "]";
      check_keys(cl[i], {"vars", "forbidden"}, p);
      const json& vars = require(cl[i], "vars", p);
      if (!vars.is_array()) field_error(p + ".vars", "expected an array");
      Clause c;
      for (std::size_t k = 0; k < vars.size(); ++k) {
        c.variables.push_back(static_cast<int>(
            as_int(vars[k], p + ".vars[" + std::to_string(k) + "]")));
      }
      c.forbidden = as_string(require(cl[i], "forbidden", p), p + ".forbidden");
      clauses.push_back(std::move(c));
    }
    return build_maxsat(static_cast<int>(nv), clauses);
  }
  if (builder == "file") {
    return load_hamiltonian_file(
        as_string(require(system, "path", "system"), "system.path"));
  }
  field_error("system.builder", "unknown builder '" + builder +
                                    "' (heisenberg, maxsat, z, file)");
}

void validate_config(const json& c) {
  static const std::set<std::string> keys = {
      "command",   "system",     "agsp",          "eps",
      "schedule",  "weighting",  "resampler",     "stopping",
      "trajectories", "seed",    "threads",       "max_steps",
      "mixture_steps", "output", "n_max",         "ell",
      "max_n",     "run_length", "deltas",        "depolarizing",
      "runtimes",  "term_index", "full_sweep",    "mc_trajectories"};
  check_keys(c, keys, "");
  auto opt_string = [&](const char* k) {
    if (c.contains(k)) as_string(c[k], k);
  };
  auto opt_int = [&](const char* k, long long lo) {
    if (!c.contains(k)) return;
    if (as_int(c[k], k) < lo) {
      field_error(k, "must be >= " + std::to_string(lo));
    }
  };
  auto opt_number_list = [&](const char* k, bool integer) {
    if (!c.contains(k)) return;
    if (!c[k].is_array()) field_error(k, "expected an array");
    for (std::size_t i = 0; i < c[k].size(); ++i) {
      const std::string p = std::string(k) + "[" + std::to_string(i) + "]";
      if (integer) {
        as_int(c[k][i], p);
      } else {
        as_number(c[k][i], p);
      }
    }
  };
  if (!c.contains("system")) field_error("system", "missing");
  if (!c["system"].is_object()) field_error("system", "expected an object");
  for (const char* k : {"command", "agsp", "schedule", "weighting", "resampler",
                        "stopping", "output"}) {
    opt_string(k);
  }
  if (c.contains("eps") && !c["eps"].is_null()) as_number(c["eps"], "eps");
  opt_int("trajectories", 1);
  opt_int("seed", 0);
  opt_int("threads", 0);
  opt_int("max_steps", 1);
  opt_int("mixture_steps", 0);
  opt_int("n_max", 1);
  opt_int("ell", 1);
  opt_int("max_n", 2);
  opt_int("run_length", 1);
  opt_int("term_index", 0);
  opt_int("mc_trajectories", 0);
  opt_number_list("deltas", false);
  opt_number_list("depolarizing", false);
  opt_number_list("runtimes", true);
  if (c.contains("full_sweep") && !c["full_sweep"].is_boolean()) {
    field_error("full_sweep", "expected a boolean");
  }
}

std::uint64_t config_hash(const json& config) {
  json canon = config;
  canon.erase("threads");
  canon.erase("output");
  const std::string text = canon.dump();
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace dqe::cli
