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

#include "twirlkit/superop.hpp"

#include <cmath>

namespace twirlkit {

namespace {

void check_guard(const QuditRegister& reg) {
  reg.validate();
  const Eigen::Index dim = reg.dim();
  if (dim * dim > kSuperopDimGuard) {
    throw GuardError(
        "superop: dimension guard exceeded (d^2N > 4096); "
        "use state-level trajectories");
  }
}

}  // namespace

DensityMatrix Superoperator::apply(const DensityMatrix& rho) const {
  if (rho.dim() * rho.dim() != dim()) {
    throw std::invalid_argument("superop apply: state dim mismatch");
  }
  return DensityMatrix{unvec(matrix * vec(rho.matrix), rho.dim())};
}

Superoperator identity_superop(const QuditRegister& reg) {
  check_guard(reg);
  const Eigen::Index sdim = reg.dim() * reg.dim();
  return Superoperator{reg, ComplexMatrix::Identity(sdim, sdim)};
}

Superoperator exact_twirl_superop(const QuditRegister& reg,
                                  const PermutationBasis& basis) {
  check_guard(reg);
  if (basis.reg.dim() != reg.dim()) {
    throw std::invalid_argument("exact_twirl_superop: basis mismatch");
  }
  const Eigen::Index sdim = reg.dim() * reg.dim();
  ComplexMatrix s = ComplexMatrix::Zero(sdim, sdim);
  for (const ComplexMatrix& r : basis.operators) {
    const ComplexVector v = vec(r);
    s += v * v.adjoint();
  }
  return Superoperator{reg, std::move(s)};
}

Superoperator avg_twirl_superop(int m, const UnitarySource& source,
                                const QuditRegister& reg, RngHandle& rng) {
  if (m < 1) throw std::invalid_argument("avg_twirl_superop: need M >= 1");
  check_guard(reg);
  const Eigen::Index sdim = reg.dim() * reg.dim();
  ComplexMatrix s = ComplexMatrix::Identity(sdim, sdim);
  for (int k = 1; k < m; ++k) {
    s += conjugation_superop(draw_unitary(source, k - 1, rng), reg.n_qudits);
  }
  return Superoperator{reg, s / static_cast<double>(m)};
}

Superoperator recursive_twirl_superop(const TwirlPlan& plan, RngHandle& rng) {
  plan.validate();
  check_guard(plan.reg);
  const Eigen::Index sdim = plan.reg.dim() * plan.reg.dim();
  ComplexMatrix s = ComplexMatrix::Identity(sdim, sdim);
  int step = 0;
  for (int iter = 0; iter < plan.iterations; ++iter) {
    ComplexMatrix acc = s;
    for (int j = 1; j < plan.branches; ++j) {
      const ComplexMatrix u = draw_unitary(plan.source, step++, rng);
      ComplexMatrix c;
      if (plan.variant == TwirlVariant::Isotropic) {
        const ComplexMatrix w = kron(u, u.conjugate());
        c = kron(w.conjugate(), w);
      } else {
        c = conjugation_superop(u, plan.reg.n_qudits);
      }
      acc += c * s;
    }
    s = acc / static_cast<double>(plan.branches);
  }
  return Superoperator{plan.reg, std::move(s)};
}

double superop_error(const Superoperator& s, const Superoperator& s_ref) {
  if (s.dim() != s_ref.dim()) {
    throw std::invalid_argument("superop_error: dimension mismatch");
  }
  return hs_norm_sq(s.matrix - s_ref.matrix);
}

double TheoryCurve::at(int m) const {
  if (m < 0 || m >= static_cast<int>(values.size())) {
    throw std::out_of_range("theory curve: iteration out of range");
  }
  return values[static_cast<std::size_t>(m)];
}

TheoryCurve theory_curve(TheoryLaw law, const TheoryParams& params, int m_max) {
  if (params.initial_gap < 0) {
    throw std::invalid_argument("theory curve: negative initial gap");
  }
  if (m_max < 0) throw std::invalid_argument("theory curve: negative m_max");
  TheoryCurve curve{law, params, {}};
  curve.values.reserve(static_cast<std::size_t>(m_max) + 1);
  for (int m = 0; m <= m_max; ++m) {
    double v = 0.0;
    switch (law) {
      case TheoryLaw::AvgAlgebraic:
        // Algebraic M^{-1} decay; m = 0 means the untouched state.
        v = m == 0 ? params.initial_gap : params.initial_gap / m;
        break;
      case TheoryLaw::RecursiveExponential:
        v = params.initial_gap * std::pow(2.0, -m);
        break;
      case TheoryLaw::BiasedBound: {
        if (params.p_g < 0 || params.p_g > 1) {
          throw std::invalid_argument("theory curve: p_g out of [0, 1]");
        }
        // Guaranteed mixture bound: one halving step contracts the error
        // by at least (1 + p_g)/2 regardless of the biased component.
        const double base = 2.0 / (1.0 + params.p_g);
        v = params.initial_gap * std::pow(base, -m);
        break;
      }
      case TheoryLaw::KBranch: {
        if (params.branches < 2) {
          throw std::invalid_argument("theory curve: need K >= 2");
        }
        v = params.initial_gap *
            std::pow(static_cast<double>(params.branches), -m);
        break;
      }
    }
    curve.values.push_back(v);
  }
  return curve;
}

}  // namespace twirlkit
