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

#ifndef TWIRLKIT_SUPEROP_HPP
#define TWIRLKIT_SUPEROP_HPP

#include <vector>

#include "twirlkit/twirl.hpp"

namespace twirlkit {

// Superoperator construction is refused above this total dimension
// (d^{2N} entries per side); larger systems use state-level trajectories.
inline constexpr Eigen::Index kSuperopDimGuard = 4096;

// Matrix acting on vectorized states: unvec(S · vec(ρ)) is the channel
// output.
struct Superoperator {
  QuditRegister reg;
  ComplexMatrix matrix;

  Eigen::Index dim() const { return matrix.rows(); }

  DensityMatrix apply(const DensityMatrix& rho) const;
};

Superoperator identity_superop(const QuditRegister& reg);

// S_P = Σ_k vec(R_k) vec(R_k)†: the rank-N_R twirl projector.
Superoperator exact_twirl_superop(const QuditRegister& reg,
                                  const PermutationBasis& basis);

// One realization of S_{PM} = (1/M)[1 + Σ_{k=1}^{M-1} (U_k^⊗N)* ⊗ U_k^⊗N].
Superoperator avg_twirl_superop(int m, const UnitarySource& source,
                                const QuditRegister& reg, RngHandle& rng);

// One realization of S_{QM} built by the recursive step, generalized to
// K branches per iteration.
Superoperator recursive_twirl_superop(const TwirlPlan& plan, RngHandle& rng);

// ‖s − s_ref‖² in the Hilbert-Schmidt norm.
double superop_error(const Superoperator& s, const Superoperator& s_ref);

enum class TheoryLaw { AvgAlgebraic, RecursiveExponential, BiasedBound, KBranch };

struct TheoryParams {
  double initial_gap = 0.0;  // ‖ρ‖² − ‖Pρ‖² (or d^{2N} − N_R)
  double p_g = 0.0;          // biased-bound
  int branches = 2;          // k-branch
};

// Closed-form mean-squared-error predictions, indexed by iteration count.
struct TheoryCurve {
  TheoryLaw law;
  TheoryParams params;
  std::vector<double> values;  // values[m] = prediction after m iterations

  double at(int m) const;
};

TheoryCurve theory_curve(TheoryLaw law, const TheoryParams& params, int m_max);

}  // namespace twirlkit

#endif  // TWIRLKIT_SUPEROP_HPP
