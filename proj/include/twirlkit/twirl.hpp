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

#ifndef TWIRLKIT_TWIRL_HPP
#define TWIRLKIT_TWIRL_HPP

#include <array>
#include <vector>

#include "twirlkit/linalg.hpp"
#include "twirlkit/sampling.hpp"

namespace twirlkit {

struct QuditRegister {
  int n_qudits = 1;
  Eigen::Index local_dim = 2;

  Eigen::Index dim() const;
  void validate() const;
};

// Hermitian, unit-trace, PSD matrix on a qudit register.
struct DensityMatrix {
  ComplexMatrix matrix;

  Eigen::Index dim() const { return matrix.rows(); }

  // Hermiticity/trace to 1e-10, eigenvalues >= -1e-9.
  void validate() const;
};

DensityMatrix maximally_mixed(Eigen::Index dim);

enum class TwirlVariant { Werner, Isotropic };

// Q_{K,M}: M iterations of the K-branch averaging step, fed by `source`.
struct TwirlPlan {
  QuditRegister reg;
  int branches = 2;    // K
  int iterations = 0;  // M
  UnitarySource source;
  TwirlVariant variant = TwirlVariant::Werner;

  void validate() const;
};

// HS-orthonormal Hermitian basis {R_k} of the span of the qudit
// permutation operators; the Werner projection is Σ_k Tr(ρR_k) R_k.
struct PermutationBasis {
  QuditRegister reg;
  std::vector<ComplexMatrix> operators;

  int count() const { return static_cast<int>(operators.size()); }
};

// Orthonormalizes the N! permutation operators (split into Hermitian and
// anti-Hermitian parts, enumerated in lexicographic one-line order) by
// modified Gram-Schmidt with rank truncation. Guarded to N <= 6.
PermutationBasis build_permutation_basis(const QuditRegister& reg);

// Permutation operator mapping qudit k to position perm[k].
ComplexMatrix permutation_operator(const QuditRegister& reg,
                                   const std::vector<int>& perm);

// One recursive step: ½[ρ + u^⊗N ρ (u^⊗N)†].
DensityMatrix twirl_step(const DensityMatrix& rho, const ComplexMatrix& u,
                         const QuditRegister& reg);

// Isotropic analog on two qudits: ½[ρ + (u⊗u*) ρ (u⊗u*)†].
DensityMatrix isotropic_twirl_step(const DensityMatrix& rho,
                                   const ComplexMatrix& u,
                                   const QuditRegister& reg);

// P_M: (1/M)[ρ + Σ_{k=1}^{M-1} U_k^⊗N ρ (U_k^⊗N)†], M-1 drawn unitaries.
DensityMatrix average_twirl(const DensityMatrix& rho, int m,
                            const UnitarySource& source,
                            const QuditRegister& reg, RngHandle& rng);

// One realization of Q_{K,M}; consumes M(K-1) unitaries.
DensityMatrix recursive_twirl(const DensityMatrix& rho, const TwirlPlan& plan,
                              RngHandle& rng);

// Exact Werner projection Pρ = Σ_k Tr(ρR_k) R_k.
DensityMatrix exact_twirl(const DensityMatrix& rho,
                          const PermutationBasis& basis);

// Exact isotropic projection for two qudits:
// F|Φ⁺⟩⟨Φ⁺| + (1-F)(I - |Φ⁺⟩⟨Φ⁺|)/(d²-1) with F = ⟨Φ⁺|ρ|Φ⁺⟩.
DensityMatrix exact_isotropic_twirl(const DensityMatrix& rho,
                                    const QuditRegister& reg);

enum class ScheduleKind { TwoQubitC, ThreeQubitXYZ };

// Default angle for the two-unitary cycle; found by grid search to give
// the smallest superoperator error after 50 iterations.
inline constexpr double kDefaultCycleAngle = 1.0894;

// Cyclic single-qubit schedules: [e^{icσx}, e^{icσz}] or the fixed
// three-unitary cycle [e^{i2π/3 σx}, e^{i2π/5 σy}, e^{i2π/3 σz}].
UnitarySource deterministic_schedule(ScheduleKind kind,
                                     double c = kDefaultCycleAngle);

// Grid search over c ∈ [0, π/2] (step 1e-3) minimizing the two-qubit
// superoperator error ‖S_Q − S_P‖² after `iterations` steps of the
// [e^{icσx}, e^{icσz}] cycle.
double optimize_cycle_angle(int iterations = 50, double step = 1e-3);

struct CircuitStepResult {
  DensityMatrix state;                    // unconditional (ancilla discarded)
  std::array<double, 2> outcome_probs;    // ancilla 0/1
  DensityMatrix conditional_0;
  DensityMatrix conditional_1;
};

// Ancilla-circuit realization of twirl_step: ancilla in (|0⟩+|1⟩)/√2,
// controlled-u^⊗N, ancilla measured in the computational basis.
CircuitStepResult circuit_twirl_step(const DensityMatrix& rho,
                                     const ComplexMatrix& u,
                                     const QuditRegister& reg);

// Channel-level step: Λ ↦ ½[Λ + W† Λ(W · W†) W] with W = u^⊗N, as a
// superoperator matrix acting on vectorized states.
ComplexMatrix channel_twirl_step(const ComplexMatrix& channel,
                                 const ComplexMatrix& u,
                                 const QuditRegister& reg);

// Sequential ρ ← ½(ρ + g_k ρ g_k†) over commuting involutory generators;
// equals the normalized stabilizer-group sum.
DensityMatrix stabilizer_depolarize(const DensityMatrix& rho,
                                    const std::vector<ComplexMatrix>& generators);

}  // namespace twirlkit

#endif  // TWIRLKIT_TWIRL_HPP
