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

// Shared helpers for the unit tests. Reference implementations here are kept
// deliberately independent of the library code paths they check: the matrix
// exponential uses scaling-and-squaring instead of an eigendecomposition,
// operators are assembled with explicit Kronecker products, and gradients
// come from central finite differences.

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include "quench/common.hpp"

namespace testsupport {

using quench::Complex;
using quench::Matrix;
using quench::Matrix2;
using quench::RealVector;
using quench::Vector;

/// exp(A) by scaling and squaring with a plain Taylor series. Accurate to
/// ~1e-13 for the moderate norms used in tests; shares no code with
/// Propagator, which diagonalizes.
inline Matrix expm_taylor(const Matrix& a) {
  double norm = a.cwiseAbs().sum();
  int squarings = 0;
  while (norm > 0.25 && squarings < 60) {
    norm *= 0.5;
    ++squarings;
  }
  const Matrix b = a / std::pow(2.0, squarings);
  Matrix result = Matrix::Identity(a.rows(), a.cols());
  Matrix term = Matrix::Identity(a.rows(), a.cols());
  for (int k = 1; k <= 24; ++k) {
    term = term * b / static_cast<double>(k);
    result += term;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

/// Seeded random Hermitian matrix with entries of order 1.
inline Matrix random_hermitian(int dim, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(g(gen), g(gen));
  }
  return 0.5 * (m + m.adjoint().eval());
}

/// Seeded Haar-ish random unitary: QR of a complex Gaussian matrix with the
/// R diagonal phases folded back in.
inline Matrix random_unitary(int dim, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(g(gen), g(gen));
  }
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return q;
}

/// Seeded random density matrix (PSD, unit trace).
inline Matrix random_density(int dim, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(g(gen), g(gen));
  }
  Matrix rho = m * m.adjoint();
  return rho / rho.trace().real();
}

/// Seeded random normalized state vector.
inline Vector random_state(int dim, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(g(gen), g(gen));
  return v / v.norm();
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Embeds a single-qubit operator on `qubit` of an n-qubit register, with
/// qubit 0 owning the least significant bit of the basis index. Built
/// explicitly so it cannot share bugs with the library's bit twiddling.
inline Matrix embed_1q(const Matrix2& g, int qubit, int n_qubits) {
  Matrix out = Matrix::Identity(1, 1);
  for (int j = n_qubits - 1; j >= 0; --j) {
    Matrix factor = (j == qubit) ? Matrix(g) : Matrix(Matrix2::Identity());
    out = kron(out, factor);
  }
  return out;
}

/// Dense CNOT on (control, target) of an n-qubit register, bit 0 = qubit 0.
inline Matrix embed_cnot(int control, int target, int n_qubits) {
  const int dim = 1 << n_qubits;
  Matrix out = Matrix::Zero(dim, dim);
  for (int b = 0; b < dim; ++b) {
    const int flipped = ((b >> control) & 1) ? b ^ (1 << target) : b;
    out(flipped, b) = Complex(1.0, 0.0);
  }
  return out;
}

/// Central finite-difference gradient of a scalar function.
inline RealVector fd_gradient(const std::function<double(const RealVector&)>& f,
                              const RealVector& x, double h = 1e-6) {
  RealVector g(x.size());
  RealVector xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp(i) = x(i) + h;
    const double fp = f(xp);
    xp(i) = x(i) - h;
    const double fm = f(xp);
    xp(i) = x(i);
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

inline double total_variation(const RealVector& p, const RealVector& q) {
  return 0.5 * (p - q).cwiseAbs().sum();
}

/// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path();
    for (int k = 0;; ++k) {
      fs::path candidate =
          base / ("quenchsim_test_" + tag + "_" + std::to_string(k));
      std::error_code ec;
      if (fs::create_directory(candidate, ec)) {
        path_ = candidate.string();
        break;
      }
      if (k > 10000) throw std::runtime_error("cannot create temp dir");
    }
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::string& path() const { return path_; }
  std::string file(const std::string& name) const { return path_ + "/" + name; }

 private:
  std::string path_;
};

}  // namespace testsupport
