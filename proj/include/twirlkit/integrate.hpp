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

#ifndef TWIRLKIT_INTEGRATE_HPP
#define TWIRLKIT_INTEGRATE_HPP

#include <vector>

#include "twirlkit/sampling.hpp"

namespace twirlkit {

inline constexpr Eigen::Index kMomentDimGuard = 4096;

// Stochastic approximation of ∫ U^⊗m ⊗ (U†)^⊗n dU.
struct MomentOperator {
  int u_factors = 0;     // m
  int udag_factors = 0;  // n
  Eigen::Index local_dim = 2;
  ComplexMatrix matrix;  // d^{m+n} × d^{m+n}
  int iterations_done = 0;
  // HS distance between consecutive iterates; convergence diagnostic.
  std::vector<double> step_deltas;
};

enum class UnitaryGroup { Full, Special };

// Iterates M_{k+1} = ½[1 + U_k^⊗m ⊗ (U_k*)^⊗n] M_k from M_0 = 1 and
// transposes the trailing n factors of the limit, which equals the
// target U† average. `group` Special draws determinant-corrected samples
// (experimental; no accuracy claims).
MomentOperator moment_operator(int m, int n, Eigen::Index d, int iters,
                               RngHandle& rng,
                               UnitaryGroup group = UnitaryGroup::Full);

// Entrywise mean of `runs` independent converged operators, streams
// derived from rng's seed.
MomentOperator moment_operator_averaged(int m, int n, Eigen::Index d,
                                        int iters, int runs,
                                        const RngHandle& rng,
                                        UnitaryGroup group = UnitaryGroup::Full);

// I = Tr(M · A_1⊗...⊗A_m ⊗ B_1⊗...⊗B_n); one operator serves many
// (A, B) sets.
Complex trace_integral(const std::vector<ComplexMatrix>& a_list,
                       const std::vector<ComplexMatrix>& b_list,
                       const MomentOperator& mop);

}  // namespace twirlkit

#endif  // TWIRLKIT_INTEGRATE_HPP
