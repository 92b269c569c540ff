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

#include <array>
#include <string>
#include <vector>

#include "dqe/agsp.hpp"
#include "dqe/linalg.hpp"
#include "dqe/pauli.hpp"

namespace dqe {

/// Circuits act on one ancilla (qubit 0) plus the system; system qubit j is
/// circuit qubit j + 1.
inline constexpr int kAncilla = 0;

enum class GateKind {
  kBasisRotation,    ///< H_sigma or its adjoint on one system qubit
  kCnot,             ///< control -> target
  kAncillaRotation,  ///< ry(angle) in the usual Bloch convention
  kNamed,            ///< h, s, sdg or x from parsed text
  kMeasureAncilla,
  kResetAncilla,
  kResetQubits,
};

struct Gate {
  GateKind kind = GateKind::kNamed;
  int qubit = 0;     ///< acted-on qubit; CNOT target
  int control = -1;  ///< CNOT control
  Pauli basis = Pauli::kI;
  bool dagger = false;
  double angle = 0.0;
  std::string name;         ///< kNamed only
  std::vector<int> qubits;  ///< kResetQubits only
};

struct TermMetadata {
  int term_index = 0;
  double eps = 0.0;
  double kappa_v = 0.0;
};

struct Circuit {
  int num_qubits = 1;  ///< including the ancilla
  std::vector<Gate> gates;
  std::vector<TermMetadata> terms;
};

/// theta = arccos(1 - eps), phi = arccos(1 - eps (1 - kappa_v)).
struct DilationAngles {
  double theta = 0.0;
  double phi = 0.0;
};

DilationAngles dilation_angles(double kappa_v, double eps);
/// [[cos x, -sin x], [sin x, cos x]].
Mat rotation(double x);
/// U = R_phi (x) pi + R_theta (x) (1 - pi), ancilla as the leading factor.
Mat dilation_unitary(double kappa_v, double eps, const Mat& pi);

/// Weak measurement of one Pauli term: basis rotations, CNOT ladder onto the
/// ancilla with three ancilla rotations, ladder undone, measurement.
Circuit measurement_circuit(const PauliTerm& term, double eps, double kappa_v,
                            int term_index = 0);
Circuit measurement_circuit(const PauliHamiltonian& h, std::size_t term_index,
                            double eps, Weighting weighting);

/// 2x2 or 4x4 (control first) matrix of a unitary gate.
Mat gate_matrix(const Gate& g);
bool is_unitary_gate(const Gate& g);

/// Product of the unitary gates; measurements are skipped and resets refused.
Mat circuit_unitary(const Circuit& c);

/// Unnormalized system states after each ancilla outcome, starting from
/// |0>_ancilla (x) psi. Requires exactly one measurement at the end.
struct AncillaBranches {
  std::array<double, 2> probability{};
  std::array<Vec, 2> state;  ///< normalized system state, empty if p = 0
};
AncillaBranches simulate_measurement(const Circuit& c, const Vec& psi);

/// Runs a circuit with forced measurement outcomes (one per measurement,
/// ancilla reset after use) and returns the unnormalized system state.
Vec simulate_postselected(const Circuit& c, const Vec& psi,
                          const std::vector<int>& outcomes);

/// Per-outcome system maps of a single-measurement circuit with a
/// depolarizing channel of strength p1 (p2) after every 1-qubit (2-qubit)
/// gate. Returns the unnormalized system operators for outcomes 0 and 1.
std::array<Mat, 2> simulate_noisy_branches(const Circuit& c, const Mat& rho,
                                           double p1, double p2);

/// Terms grouped into layers of pairwise disjoint supports by greedy coloring.
struct LayeredCircuit {
  std::vector<std::vector<int>> layers;
  Circuit circuit;  ///< terms serialized in layer order, ancilla reset after
                    ///< each measurement
};
std::vector<std::vector<int>> color_terms(const PauliHamiltonian& h);
LayeredCircuit schedule_sweep(const PauliHamiltonian& h, double eps,
                              Weighting weighting);

/// OpenQASM 2 text over {h, s, sdg, cx, ry, measure, reset}.
std::string export_qasm(const Circuit& c);
/// Parses the subset emitted by export_qasm.
Circuit parse_qasm(const std::string& text);

}  // namespace dqe
