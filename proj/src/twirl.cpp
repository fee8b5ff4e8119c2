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

#include "twirlkit/twirl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace twirlkit {

namespace {

constexpr double kHermiticityTol = 1e-10;
constexpr double kTraceTol = 1e-10;
constexpr double kPsdTol = 1e-9;

ComplexMatrix tensor_unitary(const ComplexMatrix& u, const QuditRegister& reg) {
  if (u.rows() != reg.local_dim || u.cols() != reg.local_dim) {
    throw std::invalid_argument("twirl: unitary does not match local dim");
  }
  return kron_power(u, reg.n_qudits);
}

void check_state(const DensityMatrix& rho, const QuditRegister& reg) {
  if (rho.dim() != reg.dim()) {
    throw std::invalid_argument("twirl: state does not match register dim");
  }
}

}  // namespace

Eigen::Index QuditRegister::dim() const {
  Eigen::Index d = 1;
  for (int k = 0; k < n_qudits; ++k) d *= local_dim;
  return d;
}

void QuditRegister::validate() const {
  if (n_qudits < 1) throw std::invalid_argument("register: need N >= 1");
  if (local_dim < 2) throw std::invalid_argument("register: need d >= 2");
}

void DensityMatrix::validate() const {
  if (matrix.rows() != matrix.cols()) {
    throw std::invalid_argument("density matrix: not square");
  }
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > kHermiticityTol) {
    throw std::invalid_argument("density matrix: not Hermitian");
  }
  if (std::abs(matrix.trace() - Complex(1.0)) > kTraceTol) {
    throw std::invalid_argument("density matrix: trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(matrix,
                                                  Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdTol) {
    throw std::invalid_argument("density matrix: negative eigenvalue");
  }
}

DensityMatrix maximally_mixed(Eigen::Index dim) {
  return DensityMatrix{ComplexMatrix::Identity(dim, dim) /
                       static_cast<double>(dim)};
}

void TwirlPlan::validate() const {
  reg.validate();
  if (branches < 2) throw std::invalid_argument("plan: need K >= 2");
  if (iterations < 0) throw std::invalid_argument("plan: negative M");
  if (variant == TwirlVariant::Isotropic && reg.n_qudits != 2) {
    throw std::invalid_argument("plan: isotropic twirl needs N = 2");
  }
  source.validate();
  if (source.unitary_dim() != reg.local_dim) {
    throw std::invalid_argument("plan: source dim does not match register");
  }
}

ComplexMatrix permutation_operator(const QuditRegister& reg,
                                   const std::vector<int>& perm) {
  const int n = reg.n_qudits;
  const Eigen::Index d = reg.local_dim;
  const Eigen::Index dim = reg.dim();
  ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
  std::vector<Eigen::Index> digits(n), moved(n);
  for (Eigen::Index col = 0; col < dim; ++col) {
    Eigen::Index rest = col;
    for (int k = n - 1; k >= 0; --k) {
      digits[k] = rest % d;
      rest /= d;
    }
    for (int k = 0; k < n; ++k) moved[perm[k]] = digits[k];
    Eigen::Index row = 0;
    for (int k = 0; k < n; ++k) row = row * d + moved[k];
    p(row, col) = 1.0;
  }
  return p;
}

PermutationBasis build_permutation_basis(const QuditRegister& reg) {
  reg.validate();
  if (reg.n_qudits > 6) {
    throw GuardError("permutation basis: N > 6 not supported");
  }
  const int n = reg.n_qudits;

  // Hermitian candidate set from each permutation operator, permutations
  // enumerated in lexicographic one-line order.
  std::vector<ComplexMatrix> candidates;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    const ComplexMatrix p = permutation_operator(reg, perm);
    candidates.push_back((p + p.adjoint()) / 2.0);
    candidates.push_back((p - p.adjoint()) / Complex(0, 2));
  } while (std::next_permutation(perm.begin(), perm.end()));

  // Modified Gram-Schmidt under the HS inner product; a candidate is
  // dropped when its residual falls below 1e-8 of its original norm.
  PermutationBasis basis{reg, {}};
  for (const ComplexMatrix& cand : candidates) {
    const double original = std::sqrt(hs_norm_sq(cand));
    if (original < 1e-14) continue;
    ComplexMatrix r = cand;
    for (const ComplexMatrix& b : basis.operators) {
      r -= hs_inner(b, r) * b;
    }
    const double residual = std::sqrt(hs_norm_sq(r));
    if (residual <= 1e-8 * original) continue;
    basis.operators.push_back(r / residual);
  }
  return basis;
}

DensityMatrix twirl_step(const DensityMatrix& rho, const ComplexMatrix& u,
                         const QuditRegister& reg) {
  check_state(rho, reg);
  const ComplexMatrix w = tensor_unitary(u, reg);
  return DensityMatrix{0.5 * (rho.matrix + w * rho.matrix * w.adjoint())};
}

DensityMatrix isotropic_twirl_step(const DensityMatrix& rho,
                                   const ComplexMatrix& u,
                                   const QuditRegister& reg) {
  if (reg.n_qudits != 2) {
    throw std::invalid_argument("isotropic twirl: needs N = 2");
  }
  check_state(rho, reg);
  if (u.rows() != reg.local_dim || u.cols() != reg.local_dim) {
    throw std::invalid_argument("isotropic twirl: unitary dim mismatch");
  }
  const ComplexMatrix w = kron(u, u.conjugate());
  return DensityMatrix{0.5 * (rho.matrix + w * rho.matrix * w.adjoint())};
}

DensityMatrix average_twirl(const DensityMatrix& rho, int m,
                            const UnitarySource& source,
                            const QuditRegister& reg, RngHandle& rng) {
  if (m < 1) throw std::invalid_argument("average_twirl: need M >= 1");
  check_state(rho, reg);
  ComplexMatrix acc = rho.matrix;
  for (int k = 1; k < m; ++k) {
    const ComplexMatrix w = tensor_unitary(draw_unitary(source, k - 1, rng), reg);
    acc += w * rho.matrix * w.adjoint();
  }
  return DensityMatrix{acc / static_cast<double>(m)};
}

DensityMatrix recursive_twirl(const DensityMatrix& rho, const TwirlPlan& plan,
                              RngHandle& rng) {
  plan.validate();
  check_state(rho, plan.reg);
  ComplexMatrix state = rho.matrix;
  int step = 0;
  for (int iter = 0; iter < plan.iterations; ++iter) {
    ComplexMatrix acc = state;
    for (int j = 1; j < plan.branches; ++j) {
      const ComplexMatrix u = draw_unitary(plan.source, step++, rng);
      ComplexMatrix w;
      if (plan.variant == TwirlVariant::Isotropic) {
        w = kron(u, u.conjugate());
      } else {
        w = tensor_unitary(u, plan.reg);
      }
      acc += w * state * w.adjoint();
    }
    state = acc / static_cast<double>(plan.branches);
  }
  return DensityMatrix{state};
}

DensityMatrix exact_twirl(const DensityMatrix& rho,
                          const PermutationBasis& basis) {
  if (rho.dim() != basis.reg.dim()) {
    throw std::invalid_argument("exact_twirl: basis/state dim mismatch");
  }
  ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (const ComplexMatrix& r : basis.operators) {
    out += hs_inner(r, rho.matrix) * r;
  }
  return DensityMatrix{out};
}

DensityMatrix exact_isotropic_twirl(const DensityMatrix& rho,
                                    const QuditRegister& reg) {
  if (reg.n_qudits != 2) {
    throw std::invalid_argument("exact isotropic twirl: needs N = 2");
  }
  check_state(rho, reg);
  const Eigen::Index d = reg.local_dim;
  const Eigen::Index dim = d * d;
  ComplexVector phi = ComplexVector::Zero(dim);
  for (Eigen::Index i = 0; i < d; ++i) {
    phi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  }
  const ComplexMatrix proj = phi * phi.adjoint();
  const double fidelity = std::real(phi.dot(rho.matrix * phi));
  const ComplexMatrix rest =
      (ComplexMatrix::Identity(dim, dim) - proj) / static_cast<double>(dim - 1);
  return DensityMatrix{fidelity * proj + (1.0 - fidelity) * rest};
}

UnitarySource deterministic_schedule(ScheduleKind kind, double c) {
  using std::numbers::pi;
  switch (kind) {
    case ScheduleKind::TwoQubitC:
      return UnitarySource::deterministic_cycle(
          {pauli_rotation(PauliAxis::X, c), pauli_rotation(PauliAxis::Z, c)});
    case ScheduleKind::ThreeQubitXYZ:
      return UnitarySource::deterministic_cycle(
          {pauli_rotation(PauliAxis::X, 2 * pi / 3),
           pauli_rotation(PauliAxis::Y, 2 * pi / 5),
           pauli_rotation(PauliAxis::Z, 2 * pi / 3)});
  }
  throw std::logic_error("deterministic_schedule: unreachable");
}

double optimize_cycle_angle(int iterations, double step) {
  const QuditRegister reg{2, 2};
  const PermutationBasis basis = build_permutation_basis(reg);
  const Eigen::Index sdim = reg.dim() * reg.dim();
  ComplexMatrix s_p = ComplexMatrix::Zero(sdim, sdim);
  for (const ComplexMatrix& r : basis.operators) {
    const ComplexVector v = vec(r);
    s_p += v * v.adjoint();
  }
  double best_c = 0.0;
  double best_err = std::numeric_limits<double>::infinity();
  for (double c = 0.0; c <= std::numbers::pi / 2 + step / 2; c += step) {
    const ComplexMatrix sx = conjugation_superop(pauli_rotation(PauliAxis::X, c), 2);
    const ComplexMatrix sz = conjugation_superop(pauli_rotation(PauliAxis::Z, c), 2);
    ComplexMatrix s = ComplexMatrix::Identity(sdim, sdim);
    for (int m = 0; m < iterations; ++m) {
      s = 0.5 * (s + (m % 2 == 0 ? sx : sz) * s);
    }
    const double err = hs_norm_sq(s - s_p);
    if (err < best_err) {
      best_err = err;
      best_c = c;
    }
  }
  return best_c;
}

CircuitStepResult circuit_twirl_step(const DensityMatrix& rho,
                                     const ComplexMatrix& u,
                                     const QuditRegister& reg) {
  check_state(rho, reg);
  const ComplexMatrix w = tensor_unitary(u, reg);
  const Eigen::Index dim = reg.dim();

  // Ancilla ⊗ register, ancilla in (|0⟩+|1⟩)/√2.
  ComplexMatrix ancilla = ComplexMatrix::Constant(2, 2, 0.5);
  ComplexMatrix full = kron(ancilla, rho.matrix);

  ComplexMatrix controlled = ComplexMatrix::Zero(2 * dim, 2 * dim);
  controlled.topLeftCorner(dim, dim) = ComplexMatrix::Identity(dim, dim);
  controlled.bottomRightCorner(dim, dim) = w;
  full = controlled * full * controlled.adjoint();

  const ComplexMatrix block0 = full.topLeftCorner(dim, dim);
  const ComplexMatrix block1 = full.bottomRightCorner(dim, dim);
  const double p0 = block0.trace().real();
  const double p1 = block1.trace().real();

  CircuitStepResult result;
  result.outcome_probs = {p0, p1};
  result.conditional_0 = DensityMatrix{block0 / p0};
  result.conditional_1 = DensityMatrix{block1 / p1};
  result.state = DensityMatrix{block0 + block1};
  return result;
}

ComplexMatrix channel_twirl_step(const ComplexMatrix& channel,
                                 const ComplexMatrix& u,
                                 const QuditRegister& reg) {
  const Eigen::Index sdim = reg.dim() * reg.dim();
  if (channel.rows() != sdim || channel.cols() != sdim) {
    throw std::invalid_argument("channel_twirl_step: channel dim mismatch");
  }
  // Matched control: the same unitary conjugates before and after Λ.
  const ComplexMatrix c = conjugation_superop(u, reg.n_qudits);
  return 0.5 * (channel + c.adjoint() * channel * c);
}

DensityMatrix stabilizer_depolarize(
    const DensityMatrix& rho, const std::vector<ComplexMatrix>& generators) {
  const Eigen::Index dim = rho.dim();
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const ComplexMatrix& g = generators[i];
    if (g.rows() != dim || g.cols() != dim) {
      throw std::invalid_argument("stabilizer_depolarize: generator dim mismatch");
    }
    require_unitary(g);
    if ((g * g - ComplexMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() >
        kUnitarityTol) {
      throw std::invalid_argument("stabilizer_depolarize: generator not involutory");
    }
    for (std::size_t j = i + 1; j < generators.size(); ++j) {
      if ((g * generators[j] - generators[j] * g).cwiseAbs().maxCoeff() >
          kUnitarityTol) {
        throw std::invalid_argument("stabilizer_depolarize: generators do not commute");
      }
    }
  }
  ComplexMatrix state = rho.matrix;
  for (const ComplexMatrix& g : generators) {
    state = 0.5 * (state + g * state * g.adjoint());
  }
  return DensityMatrix{state};
}

}  // namespace twirlkit
