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

#include "dqe/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "dqe/errors.hpp"

namespace dqe {

char to_char(Pauli p) {
  switch (p) {
    case Pauli::kI:
      return 'I';
    case Pauli::kX:
      return 'X';
    case Pauli::kY:
      return 'Y';
    case Pauli::kZ:
      return 'Z';
  }
  return '?';
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I':
      return Pauli::kI;
    case 'X':
      return Pauli::kX;
    case 'Y':
      return Pauli::kY;
    case 'Z':
      return Pauli::kZ;
    default:
      fail(ErrorKind::kInvalidInstance,
           std::string("unknown Pauli letter '") + c + "'");
  }
}

Mat pauli_matrix(Pauli p) {
  Mat m = Mat::Zero(2, 2);
  const cplx i(0.0, 1.0);
  switch (p) {
    case Pauli::kI:
      m << 1, 0, 0, 1;
      break;
    case Pauli::kX:
      m << 0, 1, 1, 0;
      break;
    case Pauli::kY:
      m << 0, -i, i, 0;
      break;
    case Pauli::kZ:
      m << 1, 0, 0, -1;
      break;
  }
  return m;
}

PauliString::PauliString(std::vector<Pauli> factors)
    : factors_(std::move(factors)) {
  if (factors_.size() > 62) {
    fail(ErrorKind::kInvalidInstance, "Pauli strings are limited to 62 qubits");
  }
  index_masks();
}

PauliString PauliString::parse(std::string_view text) {
  std::vector<Pauli> f;
  f.reserve(text.size());
  for (char c : text) f.push_back(pauli_from_char(c));
  if (f.empty()) fail(ErrorKind::kInvalidInstance, "empty Pauli string");
  return PauliString(std::move(f));
}

void PauliString::index_masks() {
  const int n = num_qubits();
  support_.clear();
  flip_mask_ = phase_mask_ = 0;
  num_y_ = 0;
  for (int q = 0; q < n; ++q) {
    Pauli p = factors_[static_cast<std::size_t>(q)];
    if (p == Pauli::kI) continue;
    support_.push_back(q);
    std::uint64_t bit = std::uint64_t{1} << bit_of(q, n);
    if (p == Pauli::kX || p == Pauli::kY) flip_mask_ |= bit;
    if (p == Pauli::kY || p == Pauli::kZ) phase_mask_ |= bit;
    if (p == Pauli::kY) ++num_y_;
  }
}

std::string PauliString::str() const {
  std::string out;
  for (Pauli p : factors_) out.push_back(to_char(p));
  return out;
}

Mat PauliString::local_matrix() const {
  Mat m = Mat::Identity(1, 1);
  for (int q : support_) m = kron(m, pauli_matrix(at(q)));
  return m;
}

cplx PauliString::phase(std::uint64_t basis_index) const {
  static const cplx kPowI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  cplx ph = kPowI[num_y_ % 4];
  if (std::popcount(basis_index & phase_mask_) & 1) ph = -ph;
  return ph;
}

Vec PauliString::apply(const Vec& psi) const {
  Vec out(psi.size());
  for (Index j = 0; j < psi.size(); ++j) {
    auto uj = static_cast<std::uint64_t>(j);
    out(static_cast<Index>(uj ^ flip_mask_)) = phase(uj) * psi(j);
  }
  return out;
}

PauliHamiltonian::PauliHamiltonian(int num_qubits, std::vector<PauliTerm> terms)
    : num_qubits_(num_qubits), terms_(std::move(terms)), kappa_(0.0) {
  if (num_qubits < 1) {
    fail(ErrorKind::kInvalidInstance, "Hamiltonian needs at least one qubit");
  }
  for (const PauliTerm& t : terms_) {
    if (t.string.num_qubits() != num_qubits) {
      fail(ErrorKind::kInvalidInstance,
           "Pauli string '" + t.string.str() + "' has length " +
               std::to_string(t.string.num_qubits()) + ", expected " +
               std::to_string(num_qubits));
    }
    if (!std::isfinite(t.coefficient) || t.coefficient == 0.0) {
      fail(ErrorKind::kInvalidInstance,
           "coefficient of '" + t.string.str() + "' must be finite and non-zero");
    }
    kappa_ += std::abs(t.coefficient);
  }
}

PauliHamiltonian build_heisenberg_chain(int n, bool periodic) {
  if (n < 2) {
    fail(ErrorKind::kInvalidInstance, "Heisenberg chain needs n >= 2");
  }
  std::vector<std::pair<int, int>> bonds;
  for (int i = 0; i + 1 < n; ++i) bonds.emplace_back(i, i + 1);
  if (periodic) bonds.emplace_back(n - 1, 0);
  std::vector<PauliTerm> terms;
  for (auto [i, j] : bonds) {
    for (Pauli p : {Pauli::kX, Pauli::kY, Pauli::kZ}) {
      std::vector<Pauli> f(static_cast<std::size_t>(n), Pauli::kI);
      f[static_cast<std::size_t>(i)] = p;
      f[static_cast<std::size_t>(j)] = p;
      terms.push_back({1.0, PauliString(std::move(f))});
    }
  }
  return PauliHamiltonian(n, std::move(terms));
}

namespace {

void validate_clause(int num_vars, const Clause& c) {
  if (c.variables.size() != c.forbidden.size()) {
    fail(ErrorKind::kInvalidInstance,
         "clause forbidden string length does not match its variable count");
  }
  if (c.variables.empty()) {
    fail(ErrorKind::kInvalidInstance, "clause has no variables");
  }
  std::vector<int> seen = c.variables;
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    fail(ErrorKind::kInvalidInstance, "clause repeats a variable");
  }
  for (int v : c.variables) {
    if (v < 0 || v >= num_vars) {
      fail(ErrorKind::kInvalidInstance,
           "clause variable " + std::to_string(v) + " out of range [0, " +
               std::to_string(num_vars) + ")");
    }
  }
  for (char b : c.forbidden) {
    if (b != '0' && b != '1') {
      fail(ErrorKind::kInvalidInstance, "forbidden assignment must be 0/1");
    }
  }
}

}  // namespace

PauliHamiltonian build_maxsat(int num_vars, const std::vector<Clause>& clauses) {
  if (num_vars < 1) fail(ErrorKind::kInvalidInstance, "need at least one var");
  std::map<std::string, double> coeff;
  std::vector<std::string> order;
  for (const Clause& c : clauses) {
    validate_clause(num_vars, c);
    const std::size_t k = c.variables.size();
    const double scale = std::ldexp(1.0, -static_cast<int>(k));
    // |b><b| = (1 + (-1)^b Z)/2 per variable; expand over Z subsets.
    for (std::size_t subset = 0; subset < (std::size_t{1} << k); ++subset) {
      std::string s(static_cast<std::size_t>(num_vars), 'I');
      double sign = 1.0;
      for (std::size_t j = 0; j < k; ++j) {
        if ((subset >> j) & 1U) {
          s[static_cast<std::size_t>(c.variables[j])] = 'Z';
          if (c.forbidden[j] == '1') sign = -sign;
        }
      }
      if (coeff.find(s) == coeff.end()) order.push_back(s);
      coeff[s] += sign * scale;
    }
  }
  std::vector<PauliTerm> terms;
  for (const std::string& s : order) {
    double a = coeff[s];
    if (std::abs(a) < 1e-14) continue;
    terms.push_back({a, PauliString::parse(s)});
  }
  return PauliHamiltonian(num_vars, std::move(terms));
}

int count_violations(int num_vars, const std::vector<Clause>& clauses,
                     std::uint64_t basis_state) {
  int count = 0;
  for (const Clause& c : clauses) {
    bool violated = true;
    for (std::size_t j = 0; j < c.variables.size(); ++j) {
      int bit = static_cast<int>(
          (basis_state >> bit_of(c.variables[j], num_vars)) & 1U);
      if (bit != c.forbidden[j] - '0') {
        violated = false;
        break;
      }
    }
    if (violated) ++count;
  }
  return count;
}

Mat to_dense(const PauliString& s) {
  require_dense(s.num_qubits());
  const Index dim = Index{1} << s.num_qubits();
  Mat m = Mat::Zero(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    auto uj = static_cast<std::uint64_t>(j);
    m(static_cast<Index>(uj ^ s.flip_mask()), j) = s.phase(uj);
  }
  return m;
}

Mat to_dense(const PauliHamiltonian& h) {
  require_dense(h.num_qubits());
  const Index dim = h.dimension();
  Mat m = Mat::Zero(dim, dim);
  for (const PauliTerm& t : h.terms()) {
    for (Index j = 0; j < dim; ++j) {
      auto uj = static_cast<std::uint64_t>(j);
      m(static_cast<Index>(uj ^ t.string.flip_mask()), j) +=
          t.coefficient * t.string.phase(uj);
    }
  }
  return m;
}

Vec apply_hamiltonian(const PauliHamiltonian& h, const Vec& psi) {
  Vec out = Vec::Zero(psi.size());
  for (const PauliTerm& t : h.terms()) {
    for (Index j = 0; j < psi.size(); ++j) {
      auto uj = static_cast<std::uint64_t>(j);
      out(static_cast<Index>(uj ^ t.string.flip_mask())) +=
          t.coefficient * t.string.phase(uj) * psi(j);
    }
  }
  return out;
}

double degeneracy_tolerance(double norm) { return 1e-9 * std::max(1.0, norm); }

SpectralData diagonalize_dense(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(h));
  SpectralData sd;
  sd.dimension = h.rows();
  sd.eigenvalues = es.eigenvalues();
  sd.eigenvectors = es.eigenvectors();
  sd.norm = sd.eigenvalues.cwiseAbs().maxCoeff();
  sd.lambda0 = sd.eigenvalues(0);
  const double tol = degeneracy_tolerance(sd.norm);
  Index n0 = 0;
  while (n0 < sd.dimension && sd.eigenvalues(n0) < sd.lambda0 + tol) ++n0;
  sd.degeneracy = static_cast<int>(n0);
  sd.lambda1 = n0 < sd.dimension ? sd.eigenvalues(n0) : sd.lambda0;
  sd.gap = sd.lambda1 - sd.lambda0;
  Mat v0 = sd.eigenvectors.leftCols(n0);
  sd.ground_projector = v0 * v0.adjoint();
  return sd;
}

SpectralData diagonalize(const PauliHamiltonian& h) {
  return diagonalize_dense(to_dense(h));
}

}  // namespace dqe
