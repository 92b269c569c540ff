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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dqe/linalg.hpp"

namespace dqe {

enum class Pauli : std::uint8_t { kI = 0, kX = 1, kY = 2, kZ = 3 };

char to_char(Pauli p);
Pauli pauli_from_char(char c);
/// 2x2 matrix of a single Pauli factor.
Mat pauli_matrix(Pauli p);

/// Tensor product of single-qubit Paulis, one factor per qubit.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::vector<Pauli> factors);
  /// Parses e.g. "XIZY". Throws an invalid-instance error on other letters.
  static PauliString parse(std::string_view text);

  int num_qubits() const { return static_cast<int>(factors_.size()); }
  const std::vector<Pauli>& factors() const { return factors_; }
  Pauli at(int qubit) const { return factors_[static_cast<std::size_t>(qubit)]; }
  /// Ordered non-identity positions.
  const std::vector<int>& support() const { return support_; }
  std::string str() const;

  /// Dense operator restricted to the support qubits, in support order.
  Mat local_matrix() const;
  /// h|psi> in O(D) via bit flips and phases.
  Vec apply(const Vec& psi) const;
  /// h|j> = phase(j) |j ^ flip_mask()>.
  std::uint64_t flip_mask() const { return flip_mask_; }
  cplx phase(std::uint64_t basis_index) const;

  bool operator==(const PauliString& other) const {
    return factors_ == other.factors_;
  }

 private:
  std::vector<Pauli> factors_;
  std::vector<int> support_;
  std::uint64_t flip_mask_ = 0;   // X or Y positions
  std::uint64_t phase_mask_ = 0;  // Y or Z positions
  int num_y_ = 0;
  void index_masks();
};

struct PauliTerm {
  double coefficient = 0.0;
  PauliString string;

  double sign() const { return coefficient < 0 ? -1.0 : 1.0; }
};

/// H = sum_v alpha_v h_v.
class PauliHamiltonian {
 public:
  PauliHamiltonian(int num_qubits, std::vector<PauliTerm> terms);

  int num_qubits() const { return num_qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  std::size_t num_terms() const { return terms_.size(); }
  /// Sum of absolute coefficients.
  double kappa() const { return kappa_; }
  Index dimension() const { return Index{1} << num_qubits_; }

 private:
  int num_qubits_;
  std::vector<PauliTerm> terms_;
  double kappa_;
};

/// Exact spectral data of a dense Hamiltonian.
struct SpectralData {
  double lambda0 = 0.0;
  /// Next distinct eigenvalue. Equals lambda0 when the spectrum is flat.
  double lambda1 = 0.0;
  double gap = 0.0;
  double norm = 0.0;
  Mat ground_projector;
  int degeneracy = 0;
  Index dimension = 0;
  RVec eigenvalues;
  Mat eigenvectors;

  bool gapped() const { return gap > 0.0; }
};

/// Nearest-neighbour XX+YY+ZZ couplings, open or periodic.
PauliHamiltonian build_heisenberg_chain(int n, bool periodic = false);

struct Clause {
  std::vector<int> variables;
  std::string forbidden;  // one '0'/'1' per variable
};

/// Sum of projectors onto forbidden assignments, expanded into Z/I strings.
/// Identical strings are merged and cancelled terms dropped.
PauliHamiltonian build_maxsat(int num_vars, const std::vector<Clause>& clauses);

/// Number of clauses violated by a basis state (qubit 0 is the top bit).
int count_violations(int num_vars, const std::vector<Clause>& clauses,
                     std::uint64_t basis_state);

Mat to_dense(const PauliString& s);
Mat to_dense(const PauliHamiltonian& h);
/// H|psi> without forming H.
Vec apply_hamiltonian(const PauliHamiltonian& h, const Vec& psi);

/// Tolerance separating distinct eigenvalues.
double degeneracy_tolerance(double norm);

SpectralData diagonalize(const PauliHamiltonian& h);
SpectralData diagonalize_dense(const Mat& h);

}  // namespace dqe
