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
#include <iosfwd>
#include <string>

#include "dqe/errors.hpp"
#include "dqe/pauli.hpp"
#include "json.hpp"

namespace dqe::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitResource = 3,
  kExitNumerical = 4,
};

/// Maps a library error kind onto the exit-code contract.
int exit_code_for(ErrorKind kind);

/// Parses JSON text; syntax errors become config errors naming line and
/// column, prefixed by `source`.
nlohmann::json parse_json_text(const std::string& text,
                               const std::string& source);

/// Reads {"num_qubits": int, "terms": [{"coeff": float, "paulis": "XZ"}]}.
/// Field errors name the offending path, e.g. "terms[2].paulis".
PauliHamiltonian hamiltonian_from_json(const nlohmann::json& j);
PauliHamiltonian load_hamiltonian_file(const std::string& path);

/// Builds the Hamiltonian described by a config "system" object.
PauliHamiltonian build_system(const nlohmann::json& system);

/// Checks field names and types of an experiment config. Throws kConfig
/// errors naming the offending field.
void validate_config(const nlohmann::json& config);

/// 64-bit FNV-1a of the canonical dump of the config with the fields that do
/// not affect output ("threads", "output") removed.
std::uint64_t config_hash(const nlohmann::json& config);

/// Entry point used by the dqe binary and by tests.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace dqe::cli
