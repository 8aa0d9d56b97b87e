// Copyright 2026 The quenchsim authors
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

#include "quench/circuit.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "quench/format.hpp"

namespace quench {

Matrix2 u3_matrix(double theta, double phi, double lambda) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const Complex el = std::polar(1.0, lambda);
  const Complex ep = std::polar(1.0, phi);
  Matrix2 u;
  u << c, -el * s, ep * s, ep * el * c;
  return u;
}

Matrix2 u3_dtheta(double theta, double phi, double lambda) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const Complex el = std::polar(1.0, lambda);
  const Complex ep = std::polar(1.0, phi);
  Matrix2 d;
  d << -0.5 * s, -0.5 * el * c, 0.5 * ep * c, -0.5 * ep * el * s;
  return d;
}

Matrix2 u3_dphi(double theta, double phi, double lambda) {
  Matrix2 d = u3_matrix(theta, phi, lambda);
  d.row(0).setZero();
  d.row(1) *= imag_unit();
  return d;
}

Matrix2 u3_dlambda(double theta, double phi, double lambda) {
  Matrix2 d = u3_matrix(theta, phi, lambda);
  d.col(0).setZero();
  d.col(1) *= imag_unit();
  return d;
}

Matrix2 pauli_matrix(char p) {
  Matrix2 m;
  const Complex i1 = imag_unit();
  switch (p) {
    case 'I':
      m = Matrix2::Identity();
      break;
    case 'X':
      m << 0, 1, 1, 0;
      break;
    case 'Y':
      m << 0, -i1, i1, 0;
      break;
    case 'Z':
      m << 1, 0, 0, -1;
      break;
    default:
      throw std::invalid_argument(std::string("unknown Pauli '") + p + "'");
  }
  return m;
}

Gate Gate::u3(int qubit, int param_index) {
  Gate g;
  g.kind = GateKind::kU3;
  g.q0 = qubit;
  g.param_index = param_index;
  return g;
}

Gate Gate::cnot(int control, int target) {
  Gate g;
  g.kind = GateKind::kCnot;
  g.q0 = control;
  g.q1 = target;
  return g;
}

Gate Gate::pauli_gate(int qubit, char p) {
  Gate g;
  g.kind = GateKind::kPauli;
  g.q0 = qubit;
  g.pauli = p;
  return g;
}

Gate Gate::dress(int qubit, const Matrix2& u) {
  Gate g;
  g.kind = GateKind::kDress;
  g.q0 = qubit;
  g.fixed = u;
  return g;
}

int Circuit::cnot_count() const {
  int n = 0;
  for (const Gate& g : gates) {
    if (g.kind == GateKind::kCnot) ++n;
  }
  return n;
}

void Circuit::validate() const {
  if (n_qubits < 1 || n_qubits > 12) {
    throw std::invalid_argument("circuit qubit count out of range");
  }
  if (n_params < 0) {
    throw std::invalid_argument("negative parameter count");
  }
  if (std::abs(std::abs(global_phase) - 1.0) > 1e-9) {
    throw std::invalid_argument("global phase must be unimodular");
  }
  for (const Gate& g : gates) {
    if (g.q0 < 0 || g.q0 >= n_qubits) {
      throw std::invalid_argument("gate qubit index out of range");
    }
    switch (g.kind) {
      case GateKind::kCnot:
        if (g.q1 < 0 || g.q1 >= n_qubits || g.q1 == g.q0) {
          throw std::invalid_argument("CNOT needs two distinct qubits");
        }
        break;
      case GateKind::kU3:
        if (g.param_index < 0 || g.param_index + 3 > n_params) {
          throw std::invalid_argument("U3 parameter index out of range");
        }
        break;
      case GateKind::kPauli:
        pauli_matrix(g.pauli);  // throws on bad label
        break;
      case GateKind::kDress:
        if ((g.fixed * g.fixed.adjoint() - Matrix2::Identity())
                .cwiseAbs()
                .maxCoeff() > 1e-9) {
          throw std::invalid_argument("dressing gate is not unitary");
        }
        break;
    }
  }
}

Circuit ansatz(int n_qubits, int layers) {
  if (n_qubits < 2 || n_qubits > 12) {
    throw std::invalid_argument(
        "ansatz is defined for linear chains of 2..12 qubits");
  }
  if (layers < 1) {
    throw std::invalid_argument("ansatz needs at least one layer");
  }
  Circuit c;
  c.n_qubits = n_qubits;
  int p = 0;
  for (int layer = 0; layer < layers; ++layer) {
    for (int q = 0; q + 1 < n_qubits; q += 2) {
      c.gates.push_back(Gate::cnot(q, q + 1));
    }
    for (int q = 1; q + 1 < n_qubits; q += 2) {
      c.gates.push_back(Gate::cnot(q, q + 1));
    }
    for (int q = 0; q < n_qubits; ++q) {
      c.gates.push_back(Gate::u3(q, p));
      p += 3;
    }
  }
  c.n_params = p;
  return c;
}

Matrix2 gate_matrix_1q(const Gate& g, const RealVector& params) {
  switch (g.kind) {
    case GateKind::kU3:
      return u3_matrix(params(g.param_index), params(g.param_index + 1),
                       params(g.param_index + 2));
    case GateKind::kPauli:
      return pauli_matrix(g.pauli);
    case GateKind::kDress:
      return g.fixed;
    case GateKind::kCnot:
      break;
  }
  throw std::invalid_argument("gate_matrix_1q called on a CNOT");
}

void apply_1q_left(Matrix& m, const Matrix2& g, int qubit) {
  const Eigen::Index dim = m.rows();
  const Eigen::Index bit = Eigen::Index(1) << qubit;
  for (Eigen::Index r0 = 0; r0 < dim; ++r0) {
    if (r0 & bit) continue;
    const Eigen::Index r1 = r0 | bit;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const Complex a = m(r0, c);
      const Complex b = m(r1, c);
      m(r0, c) = g(0, 0) * a + g(0, 1) * b;
      m(r1, c) = g(1, 0) * a + g(1, 1) * b;
    }
  }
}

void apply_1q_right_adjoint(Matrix& m, const Matrix2& g, int qubit) {
  const Eigen::Index dim = m.cols();
  const Eigen::Index bit = Eigen::Index(1) << qubit;
  for (Eigen::Index c0 = 0; c0 < dim; ++c0) {
    if (c0 & bit) continue;
    const Eigen::Index c1 = c0 | bit;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const Complex a = m(r, c0);
      const Complex b = m(r, c1);
      m(r, c0) = std::conj(g(0, 0)) * a + std::conj(g(0, 1)) * b;
      m(r, c1) = std::conj(g(1, 0)) * a + std::conj(g(1, 1)) * b;
    }
  }
}

void apply_cnot_left(Matrix& m, int control, int target) {
  const Eigen::Index dim = m.rows();
  const Eigen::Index cbit = Eigen::Index(1) << control;
  const Eigen::Index tbit = Eigen::Index(1) << target;
  for (Eigen::Index r = 0; r < dim; ++r) {
    if ((r & cbit) && !(r & tbit)) m.row(r).swap(m.row(r | tbit));
  }
}

void apply_cnot_right(Matrix& m, int control, int target) {
  const Eigen::Index dim = m.cols();
  const Eigen::Index cbit = Eigen::Index(1) << control;
  const Eigen::Index tbit = Eigen::Index(1) << target;
  for (Eigen::Index c = 0; c < dim; ++c) {
    if ((c & cbit) && !(c & tbit)) m.col(c).swap(m.col(c | tbit));
  }
}

void apply_1q_state(Vector& psi, const Matrix2& g, int qubit) {
  const Eigen::Index dim = psi.size();
  const Eigen::Index bit = Eigen::Index(1) << qubit;
  for (Eigen::Index r0 = 0; r0 < dim; ++r0) {
    if (r0 & bit) continue;
    const Eigen::Index r1 = r0 | bit;
    const Complex a = psi(r0);
    const Complex b = psi(r1);
    psi(r0) = g(0, 0) * a + g(0, 1) * b;
    psi(r1) = g(1, 0) * a + g(1, 1) * b;
  }
}

void apply_cnot_state(Vector& psi, int control, int target) {
  const Eigen::Index dim = psi.size();
  const Eigen::Index cbit = Eigen::Index(1) << control;
  const Eigen::Index tbit = Eigen::Index(1) << target;
  for (Eigen::Index r = 0; r < dim; ++r) {
    if ((r & cbit) && !(r & tbit)) std::swap(psi(r), psi(r | tbit));
  }
}

Matrix contract(const Circuit& c, const RealVector& params) {
  c.validate();
  if (params.size() != c.n_params) {
    throw std::invalid_argument("parameter vector length mismatch");
  }
  const Eigen::Index dim = Eigen::Index(1) << c.n_qubits;
  Matrix u = Matrix::Identity(dim, dim);
  for (const Gate& g : c.gates) {
    if (g.kind == GateKind::kCnot) {
      apply_cnot_left(u, g.q0, g.q1);
    } else {
      apply_1q_left(u, gate_matrix_1q(g, params), g.q0);
    }
  }
  if (c.global_phase != Complex(1.0, 0.0)) u *= c.global_phase;
  return u;
}

Circuit fold_cnots(const Circuit& c, int factor) {
  if (factor < 1 || factor % 2 == 0) {
    throw std::invalid_argument("fold factor must be a positive odd integer");
  }
  Circuit folded = c;
  folded.gates.clear();
  folded.gates.reserve(c.gates.size() +
                       static_cast<std::size_t>(c.cnot_count()) * (factor - 1));
  for (const Gate& g : c.gates) {
    if (g.kind == GateKind::kCnot) {
      for (int k = 0; k < factor; ++k) folded.gates.push_back(g);
    } else {
      folded.gates.push_back(g);
    }
  }
  return folded;
}

std::string circuit_to_text(const Circuit& c, const RealVector* params) {
  c.validate();
  if (params && params->size() != c.n_params) {
    throw std::invalid_argument("parameter vector length mismatch");
  }
  std::ostringstream out;
  out << "circuit v1\n";
  out << "qubits " << c.n_qubits << "\n";
  out << "params " << c.n_params << "\n";
  out << "phase " << format_double(c.global_phase.real()) << " "
      << format_double(c.global_phase.imag()) << "\n";
  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case GateKind::kU3:
        out << "u3 " << g.q0 << " " << g.param_index << "\n";
        break;
      case GateKind::kCnot:
        out << "cnot " << g.q0 << " " << g.q1 << "\n";
        break;
      case GateKind::kPauli:
        out << "pauli " << g.q0 << " " << g.pauli << "\n";
        break;
      case GateKind::kDress:
        out << "dress " << g.q0;
        for (int r = 0; r < 2; ++r) {
          for (int col = 0; col < 2; ++col) {
            out << " " << format_double(g.fixed(r, col).real()) << " "
                << format_double(g.fixed(r, col).imag());
          }
        }
        out << "\n";
        break;
    }
  }
  if (params) {
    for (Eigen::Index i = 0; i < params->size(); ++i) {
      out << "value " << i << " " << format_double((*params)(i)) << "\n";
    }
  }
  out << "end\n";
  return out.str();
}

Circuit circuit_from_text(const std::string& text, RealVector* params) {
  std::istringstream in(text);
  std::string line;
  // Leading comment lines (e.g. an embedded config hash) are allowed.
  bool found_magic = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    found_magic = (line == "circuit v1");
    break;
  }
  if (!found_magic) {
    throw std::invalid_argument("not a circuit v1 file");
  }
  Circuit c;
  bool saw_end = false;
  std::vector<std::pair<long, double>> values;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "end") {
      saw_end = true;
      break;
    } else if (tok == "qubits") {
      ls >> c.n_qubits;
    } else if (tok == "params") {
      ls >> c.n_params;
    } else if (tok == "phase") {
      std::string re, im;
      ls >> re >> im;
      c.global_phase = Complex(parse_double(re), parse_double(im));
    } else if (tok == "u3") {
      int q = 0, p = 0;
      ls >> q >> p;
      c.gates.push_back(Gate::u3(q, p));
    } else if (tok == "cnot") {
      int a = 0, b = 0;
      ls >> a >> b;
      c.gates.push_back(Gate::cnot(a, b));
    } else if (tok == "pauli") {
      int q = 0;
      std::string p;
      ls >> q >> p;
      if (p.size() != 1) throw std::invalid_argument("bad pauli line");
      c.gates.push_back(Gate::pauli_gate(q, p[0]));
    } else if (tok == "dress") {
      int q = 0;
      ls >> q;
      Matrix2 u;
      for (int r = 0; r < 2; ++r) {
        for (int col = 0; col < 2; ++col) {
          std::string re, im;
          ls >> re >> im;
          u(r, col) = Complex(parse_double(re), parse_double(im));
        }
      }
      c.gates.push_back(Gate::dress(q, u));
    } else if (tok == "value") {
      std::string idx, val;
      ls >> idx >> val;
      values.emplace_back(parse_long(idx), parse_double(val));
    } else {
      throw std::invalid_argument("unknown circuit line '" + line + "'");
    }
    if (ls.fail()) {
      throw std::invalid_argument("malformed circuit line '" + line + "'");
    }
  }
  if (!saw_end) {
    throw std::invalid_argument("circuit file missing 'end'");
  }
  c.validate();
  if (params) {
    *params = RealVector::Zero(c.n_params);
    for (const auto& [idx, val] : values) {
      if (idx < 0 || idx >= c.n_params) {
        throw std::invalid_argument("parameter value index out of range");
      }
      (*params)(idx) = val;
    }
  }
  return c;
}

}  // namespace quench
