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

#ifndef TWIRLKIT_LINALG_HPP
#define TWIRLKIT_LINALG_HPP

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace twirlkit {

// Dense complex matrices everywhere. Storage is Eigen's default
// (column-major), which makes vec() a plain reshape: vec(rho) stacks the
// columns of rho top to bottom, i.e. entry rho(k,l) lands at index l*d+k.
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

// Max-entry deviation of U†U from the identity accepted as "unitary".
inline constexpr double kUnitarityTol = 1e-9;

// Raised when a resource guard (superoperator/moment dimension, basis
// size) refuses a construction.
struct GuardError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class PauliAxis { X, Y, Z };

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// a ⊗ a ⊗ ... ⊗ a (copies factors); copies == 0 gives the 1x1 identity.
ComplexMatrix kron_power(const ComplexMatrix& a, int copies);

// Column-stacking vectorization: vec(Σ ρ_{kl}|k⟩⟨l|) = Σ ρ_{kl}|l⟩⊗|k⟩.
ComplexVector vec(const ComplexMatrix& a);

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index dim);

// Squared Hilbert-Schmidt norm Tr(A†A).
double hs_norm_sq(const ComplexMatrix& a);

// Tr(A†B); coincides with the Tr(AB) scalar product on Hermitian inputs.
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

bool is_unitary(const ComplexMatrix& u, double tol = kUnitarityTol);

void require_unitary(const ComplexMatrix& u, double tol = kUnitarityTol);

// (u^⊗copies)* ⊗ u^⊗copies, acting on vec(ρ) as vec(u^⊗copies ρ u^⊗copies†).
ComplexMatrix conjugation_superop(const ComplexMatrix& u, int copies);

// exp(i·angle·σ_axis) = cos(angle)·I + i·sin(angle)·σ_axis, in closed form.
ComplexMatrix pauli_rotation(PauliAxis axis, double angle);

ComplexMatrix pauli_matrix(PauliAxis axis);

}  // namespace twirlkit

#endif  // TWIRLKIT_LINALG_HPP
