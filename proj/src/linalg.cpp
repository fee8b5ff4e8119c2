// Copyright 2026 The twirlkit authors
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

#include "twirlkit/linalg.hpp"

#include <cmath>
#include <limits>

namespace twirlkit {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index ra = a.rows(), ca = a.cols();
  const Eigen::Index rb = b.rows(), cb = b.cols();
  if (ra != 0 && rb > std::numeric_limits<Eigen::Index>::max() / ra) {
    throw std::overflow_error("kron: product shape overflows");
  }
  ComplexMatrix out(ra * rb, ca * cb);
  for (Eigen::Index i = 0; i < ra; ++i) {
    for (Eigen::Index j = 0; j < ca; ++j) {
      out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix kron_power(const ComplexMatrix& a, int copies) {
  if (copies < 0) {
    throw std::invalid_argument("kron_power: negative copy count");
  }
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int k = 0; k < copies; ++k) {
    out = kron(out, a);
  }
  return out;
}

ComplexVector vec(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("vec: matrix must be square");
  }
  // Column-major storage makes this the column-stacking map directly.
  return ComplexVector(Eigen::Map<const ComplexVector>(a.data(), a.size()));
}

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index dim) {
  if (v.size() != dim * dim) {
    throw std::invalid_argument("unvec: length does not match dim^2");
  }
  return ComplexMatrix(Eigen::Map<const ComplexMatrix>(v.data(), dim, dim));
}

double hs_norm_sq(const ComplexMatrix& a) { return a.squaredNorm(); }

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("hs_inner: shape mismatch");
  }
  return (a.adjoint() * b).trace();
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  ComplexMatrix dev = u.adjoint() * u;
  dev.diagonal().array() -= 1.0;
  return dev.cwiseAbs().maxCoeff() <= tol;
}

void require_unitary(const ComplexMatrix& u, double tol) {
  if (!is_unitary(u, tol)) {
    throw std::invalid_argument("matrix is not unitary within tolerance");
  }
}

ComplexMatrix conjugation_superop(const ComplexMatrix& u, int copies) {
  require_unitary(u);
  const ComplexMatrix un = kron_power(u, copies);
  return kron(un.conjugate(), un);
}

ComplexMatrix pauli_matrix(PauliAxis axis) {
  ComplexMatrix s(2, 2);
  switch (axis) {
    case PauliAxis::X:
      s << 0, 1, 1, 0;
      break;
    case PauliAxis::Y:
      s << 0, Complex(0, -1), Complex(0, 1), 0;
      break;
    case PauliAxis::Z:
      s << 1, 0, 0, -1;
      break;
  }
  return s;
}

ComplexMatrix pauli_rotation(PauliAxis axis, double angle) {
  return std::cos(angle) * ComplexMatrix::Identity(2, 2) +
         Complex(0, 1) * std::sin(angle) * pauli_matrix(axis);
}

}  // namespace twirlkit
