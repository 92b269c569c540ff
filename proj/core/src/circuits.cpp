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

#include "dqe/circuits.hpp"

#include <cmath>
#include <cstdio>
#include <regex>
#include <sstream>

#include "dqe/errors.hpp"

namespace dqe {

namespace {

const cplx kI{0.0, 1.0};

Mat hadamard() {
  Mat h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  return h / std::sqrt(2.0);
}

Mat phase_s() {
  Mat s = Mat::Zero(2, 2);
  s(0, 0) = 1.0;
  s(1, 1) = kI;
  return s;
}

Mat ry(double angle) {
  Mat r(2, 2);
  double c = std::cos(angle / 2.0);
  double s = std::sin(angle / 2.0);
  r << c, -s, s, c;
  return r;
}

Mat cnot() {
  Mat c = Mat::Zero(4, 4);
  c(0, 0) = 1.0;
  c(1, 1) = 1.0;
  c(2, 3) = 1.0;
  c(3, 2) = 1.0;
  return c;
}

std::vector<int> gate_qubits(const Gate& g) {
  if (g.kind == GateKind::kCnot) return {g.control, g.qubit};
  return {g.qubit};
}

void check_qubit(int q, int n) {
  if (q < 0 || q >= n) fail(ErrorKind::kParameter, "gate qubit out of range");
}

/// R(x) = [[cos x, -sin x], [sin x, cos x]] equals ry(2x).
Gate ancilla_rotation(double half_angle) {
  Gate g;
  g.kind = GateKind::kAncillaRotation;
  g.qubit = kAncilla;
  g.angle = 2.0 * half_angle;
  return g;
}

Mat apply_unitary_density(const Mat& u, const std::vector<int>& q, int n,
                          const Mat& rho) {
  Mat left = apply_local_left(u, q, n, rho);
  return apply_local_left(u, q, n, left.adjoint()).adjoint();
}

Mat depolarize(const Mat& rho, const std::vector<int>& q, int n, double p) {
  if (p == 0.0) return rho;
  const std::size_t k = q.size();
  const std::size_t count = std::size_t{1} << (2 * k);
  Mat twirl = Mat::Zero(rho.rows(), rho.cols());
  for (std::size_t code = 0; code < count; ++code) {
    Mat op = Mat::Identity(1, 1);
    for (std::size_t j = 0; j < k; ++j) {
      auto letter = static_cast<Pauli>((code >> (2 * j)) & 3U);
      op = kron(op, pauli_matrix(letter));
    }
    twirl += apply_unitary_density(op, q, n, rho);
  }
  return (1.0 - p) * rho + (p / double(count)) * twirl;
}

int count_measurements(const Circuit& c) {
  int m = 0;
  for (const Gate& g : c.gates) m += g.kind == GateKind::kMeasureAncilla;
  return m;
}

}  // namespace

DilationAngles dilation_angles(double kappa_v, double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    fail(ErrorKind::kParameter, "eps must lie in [0, 1]");
  }
  if (!(kappa_v >= 0.0 && kappa_v <= 1.0)) {
    fail(ErrorKind::kParameter, "kappa_v must lie in [0, 1]");
  }
  return {std::acos(1.0 - eps), std::acos(1.0 - eps * (1.0 - kappa_v))};
}

Mat rotation(double x) {
  Mat r(2, 2);
  r << std::cos(x), -std::sin(x), std::sin(x), std::cos(x);
  return r;
}

Mat dilation_unitary(double kappa_v, double eps, const Mat& pi) {
  DilationAngles a = dilation_angles(kappa_v, eps);
  Mat rest = dqe::identity(pi.rows()) - pi;
  return kron(rotation(a.phi), pi) + kron(rotation(a.theta), rest);
}

Circuit measurement_circuit(const PauliTerm& term, double eps, double kappa_v,
                            int term_index) {
  const std::vector<int>& support = term.string.support();
  if (support.empty()) {
    fail(ErrorKind::kParameter, "measurement circuit needs a non-identity term");
  }
  DilationAngles a = dilation_angles(kappa_v, eps);
  // The ladder leaves parity 0 on the +1 eigenspace of h. The measured
  // projector is the -sign(alpha) eigenspace, so the angle pair swaps with
  // the sign.
  double first = term.sign() < 0 ? a.phi : a.theta;
  double second = term.sign() < 0 ? a.theta : a.phi;
  double half = (second - first) / 2.0;

  Circuit c;
  c.num_qubits = term.string.num_qubits() + 1;
  c.terms.push_back({term_index, eps, kappa_v});
  auto basis = [&](bool dagger) {
    for (int q : support) {
      Gate g;
      g.kind = GateKind::kBasisRotation;
      g.qubit = q + 1;
      g.basis = term.string.at(q);
      g.dagger = dagger;
      c.gates.push_back(g);
    }
  };
  auto ladder = [&](bool reverse) {
    for (std::size_t j = 0; j < support.size(); ++j) {
      int q = support[reverse ? support.size() - 1 - j : j];
      Gate g;
      g.kind = GateKind::kCnot;
      g.control = q + 1;
      g.qubit = kAncilla;
      c.gates.push_back(g);
    }
  };
  basis(true);
  c.gates.push_back(ancilla_rotation(first));
  ladder(false);
  c.gates.push_back(ancilla_rotation(-half));
  ladder(true);
  c.gates.push_back(ancilla_rotation(half));
  basis(false);
  Gate m;
  m.kind = GateKind::kMeasureAncilla;
  m.qubit = kAncilla;
  c.gates.push_back(m);
  return c;
}

Circuit measurement_circuit(const PauliHamiltonian& h, std::size_t term_index,
                            double eps, Weighting weighting) {
  if (term_index >= h.num_terms()) {
    fail(ErrorKind::kParameter, "term index out of range");
  }
  const PauliTerm& t = h.terms()[term_index];
  double kappa_v = weighting == Weighting::kNormalized
                       ? std::abs(t.coefficient) / h.kappa()
                       : 1.0;
  return measurement_circuit(t, eps, kappa_v, static_cast<int>(term_index));
}

bool is_unitary_gate(const Gate& g) {
  return g.kind == GateKind::kBasisRotation || g.kind == GateKind::kCnot ||
         g.kind == GateKind::kAncillaRotation || g.kind == GateKind::kNamed;
}

Mat gate_matrix(const Gate& g) {
  switch (g.kind) {
    case GateKind::kBasisRotation: {
      Mat u = dqe::identity(2);
      if (g.basis == Pauli::kX) u = hadamard();
      if (g.basis == Pauli::kY) u = phase_s() * hadamard();
      return g.dagger ? Mat(u.adjoint()) : u;
    }
    case GateKind::kCnot:
      return cnot();
    case GateKind::kAncillaRotation:
      return ry(g.angle);
    case GateKind::kNamed:
      if (g.name == "h") return hadamard();
      if (g.name == "s") return phase_s();
      if (g.name == "sdg") return phase_s().adjoint();
      if (g.name == "x") return pauli_matrix(Pauli::kX);
      fail(ErrorKind::kParameter, "unknown gate '" + g.name + "'");
    default:
      fail(ErrorKind::kParameter, "gate has no unitary matrix");
  }
}

Mat circuit_unitary(const Circuit& c) {
  require_dense(c.num_qubits);
  Mat u = dqe::identity(Index{1} << c.num_qubits);
  for (const Gate& g : c.gates) {
    if (g.kind == GateKind::kMeasureAncilla) continue;
    if (!is_unitary_gate(g)) {
      fail(ErrorKind::kParameter, "circuit_unitary cannot represent a reset");
    }
    for (int q : gate_qubits(g)) check_qubit(q, c.num_qubits);
    u = apply_local_left(gate_matrix(g), gate_qubits(g), c.num_qubits, u);
  }
  return u;
}

AncillaBranches simulate_measurement(const Circuit& c, const Vec& psi) {
  if (count_measurements(c) != 1 ||
      c.gates.back().kind != GateKind::kMeasureAncilla) {
    fail(ErrorKind::kParameter, "expected a single trailing measurement");
  }
  const Index ds = Index{1} << (c.num_qubits - 1);
  if (psi.size() != ds) fail(ErrorKind::kParameter, "state dimension mismatch");
  Vec full = Vec::Zero(2 * ds);
  full.head(ds) = psi;
  for (const Gate& g : c.gates) {
    if (!is_unitary_gate(g)) continue;
    full = apply_local(gate_matrix(g), gate_qubits(g), c.num_qubits, full);
  }
  AncillaBranches out;
  for (int b = 0; b < 2; ++b) {
    Vec part = full.segment(b * ds, ds);
    double p = part.squaredNorm();
    out.probability[static_cast<std::size_t>(b)] = p;
    if (p > 0.0) out.state[static_cast<std::size_t>(b)] = part / std::sqrt(p);
  }
  return out;
}

Vec simulate_postselected(const Circuit& c, const Vec& psi,
                          const std::vector<int>& outcomes) {
  const Index ds = Index{1} << (c.num_qubits - 1);
  if (psi.size() != ds) fail(ErrorKind::kParameter, "state dimension mismatch");
  if (static_cast<int>(outcomes.size()) != count_measurements(c)) {
    fail(ErrorKind::kParameter, "one forced outcome per measurement needed");
  }
  Vec full = Vec::Zero(2 * ds);
  full.head(ds) = psi;
  std::size_t next = 0;
  for (const Gate& g : c.gates) {
    if (is_unitary_gate(g)) {
      full = apply_local(gate_matrix(g), gate_qubits(g), c.num_qubits, full);
    } else if (g.kind == GateKind::kMeasureAncilla) {
      int b = outcomes[next++];
      full.segment((1 - b) * ds, ds).setZero();
    } else if (g.kind == GateKind::kResetAncilla) {
      full.head(ds) += full.tail(ds);
      full.tail(ds).setZero();
    } else {
      fail(ErrorKind::kParameter, "qubit resets are not simulated");
    }
  }
  return full.head(ds) + full.tail(ds);
}

std::array<Mat, 2> simulate_noisy_branches(const Circuit& c, const Mat& rho,
                                           double p1, double p2) {
  if (!(p1 >= 0.0 && p1 <= 1.0 && p2 >= 0.0 && p2 <= 1.0)) {
    fail(ErrorKind::kInvalidNoise, "depolarizing rates must lie in [0, 1]");
  }
  if (count_measurements(c) != 1 ||
      c.gates.back().kind != GateKind::kMeasureAncilla) {
    fail(ErrorKind::kParameter, "expected a single trailing measurement");
  }
  const Index ds = Index{1} << (c.num_qubits - 1);
  if (rho.rows() != ds) fail(ErrorKind::kParameter, "state dimension mismatch");
  Mat full = Mat::Zero(2 * ds, 2 * ds);
  full.topLeftCorner(ds, ds) = rho;
  for (const Gate& g : c.gates) {
    if (!is_unitary_gate(g)) continue;
    // Identity basis changes are not physical gates and carry no noise.
    if (g.kind == GateKind::kBasisRotation &&
        (g.basis == Pauli::kZ || g.basis == Pauli::kI)) {
      continue;
    }
    std::vector<int> q = gate_qubits(g);
    full = apply_unitary_density(gate_matrix(g), q, c.num_qubits, full);
    full = depolarize(full, q, c.num_qubits, q.size() == 1 ? p1 : p2);
  }
  return {full.topLeftCorner(ds, ds), full.bottomRightCorner(ds, ds)};
}

std::vector<std::vector<int>> color_terms(const PauliHamiltonian& h) {
  const auto m = static_cast<int>(h.num_terms());
  std::vector<int> color(static_cast<std::size_t>(m), -1);
  int used = 0;
  auto overlap = [&](int a, int b) {
    const auto& sa = h.terms()[static_cast<std::size_t>(a)].string.support();
    const auto& sb = h.terms()[static_cast<std::size_t>(b)].string.support();
    for (int x : sa) {
      for (int y : sb) {
        if (x == y) return true;
      }
    }
    return false;
  };
  for (int i = 0; i < m; ++i) {
    std::vector<bool> taken(static_cast<std::size_t>(used) + 1, false);
    for (int j = 0; j < i; ++j) {
      if (overlap(i, j)) taken[static_cast<std::size_t>(color[j])] = true;
    }
    int c = 0;
    while (taken[static_cast<std::size_t>(c)]) ++c;
    color[static_cast<std::size_t>(i)] = c;
    used = std::max(used, c + 1);
  }
  std::vector<std::vector<int>> layers(static_cast<std::size_t>(used));
  for (int i = 0; i < m; ++i) {
    layers[static_cast<std::size_t>(color[static_cast<std::size_t>(i)])]
        .push_back(i);
  }
  return layers;
}

LayeredCircuit schedule_sweep(const PauliHamiltonian& h, double eps,
                              Weighting weighting) {
  LayeredCircuit out;
  out.layers = color_terms(h);
  out.circuit.num_qubits = h.num_qubits() + 1;
  for (const auto& layer : out.layers) {
    for (int i : layer) {
      Circuit t =
          measurement_circuit(h, static_cast<std::size_t>(i), eps, weighting);
      out.circuit.gates.insert(out.circuit.gates.end(), t.gates.begin(),
                               t.gates.end());
      out.circuit.terms.push_back(t.terms.front());
      Gate reset;
      reset.kind = GateKind::kResetAncilla;
      reset.qubit = kAncilla;
      out.circuit.gates.push_back(reset);
    }
  }
  return out;
}

std::string export_qasm(const Circuit& c) {
  std::ostringstream os;
  os << "OPENQASM 2.0;\n"
     << "include \"qelib1.inc\";\n"
     << "// q[0] is the ancilla; system qubit j is q[j+1].\n"
     << "// A real rotation [[cos x, -sin x], [sin x, cos x]] is ry(2x).\n"
     << "qreg q[" << c.num_qubits << "];\n";
  int measurements = count_measurements(c);
  if (measurements > 0) os << "creg c[" << measurements << "];\n";
  char buf[64];
  int next = 0;
  auto line = [&](const std::string& op, int q) {
    os << op << " q[" << q << "];\n";
  };
  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case GateKind::kBasisRotation:
        if (g.basis == Pauli::kX) {
          line("h", g.qubit);
        } else if (g.basis == Pauli::kY) {
          if (g.dagger) {
            line("sdg", g.qubit);
            line("h", g.qubit);
          } else {
            line("h", g.qubit);
            line("s", g.qubit);
          }
        }
        break;
      case GateKind::kCnot:
        os << "cx q[" << g.control << "],q[" << g.qubit << "];\n";
        break;
      case GateKind::kAncillaRotation:
        std::snprintf(buf, sizeof buf, "%.17g", g.angle);
        os << "ry(" << buf << ") q[" << g.qubit << "];\n";
        break;
      case GateKind::kNamed:
        line(g.name, g.qubit);
        break;
      case GateKind::kMeasureAncilla:
        os << "measure q[" << g.qubit << "] -> c[" << next++ << "];\n";
        break;
      case GateKind::kResetAncilla:
        line("reset", g.qubit);
        break;
      case GateKind::kResetQubits:
        for (int q : g.qubits) line("reset", q);
        break;
    }
  }
  return os.str();
}

Circuit parse_qasm(const std::string& text) {
  static const std::regex qreg(R"(^qreg\s+q\[(\d+)\];$)");
  static const std::regex one(R"(^(h|s|sdg|x|reset)\s+q\[(\d+)\];$)");
  static const std::regex cx(R"(^cx\s+q\[(\d+)\]\s*,\s*q\[(\d+)\];$)");
  static const std::regex rot(R"(^ry\(([^)]+)\)\s+q\[(\d+)\];$)");
  static const std::regex meas(R"(^measure\s+q\[(\d+)\]\s*->\s*c\[(\d+)\];$)");
  Circuit c;
  bool have_qreg = false;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string s = raw.substr(0, raw.find("//"));
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    s = s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
    if (s.rfind("OPENQASM", 0) == 0 || s.rfind("include", 0) == 0 ||
        s.rfind("creg", 0) == 0) {
      continue;
    }
    std::smatch m;
    Gate g;
    if (std::regex_match(s, m, qreg)) {
      c.num_qubits = std::stoi(m[1]);
      have_qreg = true;
      continue;
    }
    if (std::regex_match(s, m, one)) {
      g.qubit = std::stoi(m[2]);
      if (m[1] == "reset") {
        g.kind = g.qubit == kAncilla ? GateKind::kResetAncilla
                                     : GateKind::kResetQubits;
        if (g.kind == GateKind::kResetQubits) g.qubits = {g.qubit};
      } else {
        g.kind = GateKind::kNamed;
        g.name = m[1];
      }
    } else if (std::regex_match(s, m, cx)) {
      g.kind = GateKind::kCnot;
      g.control = std::stoi(m[1]);
      g.qubit = std::stoi(m[2]);
    } else if (std::regex_match(s, m, rot)) {
      g.kind = GateKind::kAncillaRotation;
      g.angle = std::stod(m[1]);
      g.qubit = std::stoi(m[2]);
    } else if (std::regex_match(s, m, meas)) {
      g.kind = GateKind::kMeasureAncilla;
      g.qubit = std::stoi(m[1]);
    } else {
      fail(ErrorKind::kConfig,
           "QASM line " + std::to_string(line_no) + ": cannot parse '" + s + "'");
    }
    if (!have_qreg) fail(ErrorKind::kConfig, "QASM gate before qreg");
    c.gates.push_back(g);
  }
  if (!have_qreg) fail(ErrorKind::kConfig, "QASM text has no qreg");
  return c;
}

}  // namespace dqe
