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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "test_helpers.hpp"
#include "twirlkit/twirl.hpp"

using namespace twirlkit;
using twirlkit::test::max_abs_diff;

namespace {

DensityMatrix random_state(const QuditRegister& reg, RngHandle& rng) {
  return DensityMatrix{hs_random_density_matrix(reg.dim(), rng)};
}

}  // namespace

TEST_CASE("register and state validation") {
  QuditRegister reg{2, 3};
  CHECK(reg.dim() == 9);
  reg.validate();

  QuditRegister bad{0, 2};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  DensityMatrix rho = maximally_mixed(4);
  rho.validate();
  CHECK(std::abs(rho.matrix.trace() - Complex(1)) <= 1e-15);

  DensityMatrix traceless{ComplexMatrix::Zero(2, 2)};
  CHECK_THROWS_AS(traceless.validate(), std::invalid_argument);

  ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix{neg}.validate(), std::invalid_argument);
}

TEST_CASE("permutation_operator on two qubits is the swap") {
  const QuditRegister reg{2, 2};
  const ComplexMatrix p = permutation_operator(reg, {1, 0});
  ComplexMatrix swap(4, 4);
  swap << 1, 0, 0, 0,
          0, 0, 1, 0,
          0, 1, 0, 0,
          0, 0, 0, 1;
  CHECK(max_abs_diff(p, swap) == 0.0);
  CHECK(max_abs_diff(permutation_operator(reg, {0, 1}),
                     ComplexMatrix::Identity(4, 4)) == 0.0);
}

TEST_CASE("permutation operators compose and commute with U^N") {
  const QuditRegister reg{3, 2};
  const ComplexMatrix cycle = permutation_operator(reg, {1, 2, 0});
  const ComplexMatrix cycle3 = cycle * cycle * cycle;
  CHECK(max_abs_diff(cycle3, ComplexMatrix::Identity(8, 8)) <= 1e-15);

  RngHandle rng(31);
  const ComplexMatrix u = haar_unitary(2, rng);
  const ComplexMatrix u3 = kron_power(u, 3);
  CHECK(max_abs_diff(cycle * u3, u3 * cycle) <= 1e-12);
}

TEST_CASE("permutation basis counts for small registers") {
  // Dimension of the span of permutation operators: 2 for N=2; for N=3
  // it is 5 at d=2 (one relation among the six operators) and 6 at d>=3.
  CHECK(build_permutation_basis({2, 2}).count() == 2);
  CHECK(build_permutation_basis({2, 3}).count() == 2);
  CHECK(build_permutation_basis({3, 2}).count() == 5);
  CHECK(build_permutation_basis({3, 3}).count() == 6);
  CHECK_THROWS_AS(build_permutation_basis({7, 2}), GuardError);
}

TEST_CASE("permutation basis is Hermitian and orthonormal") {
  for (const QuditRegister reg : {QuditRegister{2, 2}, QuditRegister{3, 2}}) {
    const PermutationBasis basis = build_permutation_basis(reg);
    for (int i = 0; i < basis.count(); ++i) {
      CHECK(max_abs_diff(basis.operators[i],
                         basis.operators[i].adjoint()) <= 1e-12);
      for (int j = 0; j < basis.count(); ++j) {
        const Complex ip = hs_inner(basis.operators[i], basis.operators[j]);
        CHECK(std::abs(ip - (i == j ? Complex(1) : Complex(0))) <= 1e-10);
      }
    }
  }
}

TEST_CASE("twirl_step halves toward the rotated copy") {
  const QuditRegister reg{2, 2};
  RngHandle rng(32);
  const DensityMatrix rho = random_state(reg, rng);
  const ComplexMatrix u = haar_unitary(2, rng);
  const ComplexMatrix u2 = kron_power(u, 2);
  const DensityMatrix out = twirl_step(rho, u, reg);
  const ComplexMatrix expected =
      0.5 * (rho.matrix + u2 * rho.matrix * u2.adjoint());
  CHECK(max_abs_diff(out.matrix, expected) <= 1e-14);
  out.validate();
}

TEST_CASE("a Werner-invariant state is a fixed point of twirl_step") {
  const QuditRegister reg{2, 2};
  RngHandle rng(33);
  const PermutationBasis basis = build_permutation_basis(reg);
  const DensityMatrix werner = exact_twirl(random_state(reg, rng), basis);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix u = haar_unitary(2, rng);
    CHECK(max_abs_diff(twirl_step(werner, u, reg).matrix, werner.matrix) <=
          1e-12);
  }
}

TEST_CASE("exact_twirl is the orthogonal projection onto the basis span") {
  const QuditRegister reg{3, 2};
  RngHandle rng(34);
  const PermutationBasis basis = build_permutation_basis(reg);
  const DensityMatrix rho = random_state(reg, rng);
  const DensityMatrix p1 = exact_twirl(rho, basis);
  const DensityMatrix p2 = exact_twirl(p1, basis);
  CHECK(max_abs_diff(p1.matrix, p2.matrix) <= 1e-12);
  // Pythagoras: ||rho||^2 = ||P rho||^2 + ||rho - P rho||^2.
  CHECK(hs_norm_sq(rho.matrix) ==
        doctest::Approx(hs_norm_sq(p1.matrix) +
                        hs_norm_sq(rho.matrix - p1.matrix)));
  p1.validate();
}

TEST_CASE("exact_twirl matches a Haar Monte-Carlo average") {
  const QuditRegister reg{2, 2};
  RngHandle rng(35);
  const DensityMatrix rho = random_state(reg, rng);
  const PermutationBasis basis = build_permutation_basis(reg);
  const DensityMatrix exact = exact_twirl(rho, basis);

  ComplexMatrix acc = ComplexMatrix::Zero(4, 4);
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    const ComplexMatrix u2 = kron_power(haar_unitary(2, rng), 2);
    acc += u2 * rho.matrix * u2.adjoint();
  }
  CHECK(max_abs_diff(acc / n, exact.matrix) <= 0.02);
}

TEST_CASE("exact_isotropic_twirl matches a Monte-Carlo u x u* average") {
  const QuditRegister reg{2, 2};
  RngHandle rng(36);
  const DensityMatrix rho = random_state(reg, rng);
  const DensityMatrix exact = exact_isotropic_twirl(rho, reg);
  exact.validate();

  ComplexMatrix acc = ComplexMatrix::Zero(4, 4);
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    const ComplexMatrix u = haar_unitary(2, rng);
    const ComplexMatrix w = kron(u, u.conjugate());
    acc += w * rho.matrix * w.adjoint();
  }
  CHECK(max_abs_diff(acc / n, exact.matrix) <= 0.02);

  // Isotropic-invariant states are fixed points of the isotropic step.
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix u = haar_unitary(2, rng);
    CHECK(max_abs_diff(isotropic_twirl_step(exact, u, reg).matrix,
                       exact.matrix) <= 1e-12);
  }
}

TEST_CASE("recursive_twirl converges to the exact twirl") {
  const QuditRegister reg{2, 2};
  RngHandle rng(37);
  const DensityMatrix rho = random_state(reg, rng);
  const PermutationBasis basis = build_permutation_basis(reg);
  const DensityMatrix target = exact_twirl(rho, basis);

  TwirlPlan plan{reg, 2, 40, UnitarySource::haar(2), TwirlVariant::Werner};
  const DensityMatrix out = recursive_twirl(rho, plan, rng);
  CHECK(hs_norm_sq(out.matrix - target.matrix) <= 1e-6);
}

TEST_CASE("recursive_twirl is deterministic given the stream") {
  const QuditRegister reg{2, 2};
  RngHandle state_rng(38);
  const DensityMatrix rho = random_state(reg, state_rng);
  TwirlPlan plan{reg, 3, 5, UnitarySource::haar(2), TwirlVariant::Werner};
  RngHandle r1(99, 4);
  RngHandle r2(99, 4);
  CHECK(max_abs_diff(recursive_twirl(rho, plan, r1).matrix,
                     recursive_twirl(rho, plan, r2).matrix) == 0.0);
}

TEST_CASE("average_twirl with m = 1 is the identity map") {
  const QuditRegister reg{2, 2};
  RngHandle rng(39);
  const DensityMatrix rho = random_state(reg, rng);
  const UnitarySource src = UnitarySource::haar(2);
  RngHandle draw_rng(40);
  const DensityMatrix out = average_twirl(rho, 1, src, reg, draw_rng);
  CHECK(max_abs_diff(out.matrix, rho.matrix) == 0.0);
}

TEST_CASE("average_twirl error decays roughly like 1/M") {
  const QuditRegister reg{2, 2};
  RngHandle rng(41);
  const DensityMatrix rho = random_state(reg, rng);
  const PermutationBasis basis = build_permutation_basis(reg);
  const DensityMatrix target = exact_twirl(rho, basis);
  const UnitarySource src = UnitarySource::haar(2);

  double mean_small = 0.0;
  double mean_large = 0.0;
  const int traj = 200;
  for (int t = 0; t < traj; ++t) {
    RngHandle r(50, t);
    mean_small +=
        hs_norm_sq(average_twirl(rho, 4, src, reg, r).matrix - target.matrix);
    RngHandle r2(51, t);
    mean_large +=
        hs_norm_sq(average_twirl(rho, 32, src, reg, r2).matrix - target.matrix);
  }
  // Ratio should be near 8; allow wide Monte-Carlo slack.
  CHECK(mean_small / mean_large > 4.0);
}

TEST_CASE("deterministic schedules produce the advertised cycles") {
  using std::numbers::pi;
  const UnitarySource two = deterministic_schedule(ScheduleKind::TwoQubitC);
  REQUIRE(two.cycle.size() == 2);
  CHECK(max_abs_diff(two.cycle[0],
                     pauli_rotation(PauliAxis::X, kDefaultCycleAngle)) == 0.0);
  CHECK(max_abs_diff(two.cycle[1],
                     pauli_rotation(PauliAxis::Z, kDefaultCycleAngle)) == 0.0);

  const UnitarySource three = deterministic_schedule(ScheduleKind::ThreeQubitXYZ);
  REQUIRE(three.cycle.size() == 3);
  CHECK(max_abs_diff(three.cycle[0],
                     pauli_rotation(PauliAxis::X, 2 * pi / 3)) == 0.0);
  CHECK(max_abs_diff(three.cycle[1],
                     pauli_rotation(PauliAxis::Y, 2 * pi / 5)) == 0.0);
  CHECK(max_abs_diff(three.cycle[2],
                     pauli_rotation(PauliAxis::Z, 2 * pi / 3)) == 0.0);
}

TEST_CASE("circuit_twirl_step reproduces the map and balanced outcomes") {
  const QuditRegister reg{2, 2};
  RngHandle rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix rho = random_state(reg, rng);
    const ComplexMatrix u = haar_unitary(2, rng);
    const CircuitStepResult res = circuit_twirl_step(rho, u, reg);
    const DensityMatrix direct = twirl_step(rho, u, reg);
    CHECK(max_abs_diff(res.state.matrix, direct.matrix) <= 1e-12);
    CHECK(res.outcome_probs[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(res.outcome_probs[1] == doctest::Approx(0.5).epsilon(1e-12));
    res.conditional_0.validate();
    res.conditional_1.validate();
    // The unconditional state is the probability mixture of the branches.
    const ComplexMatrix mix = res.outcome_probs[0] * res.conditional_0.matrix +
                              res.outcome_probs[1] * res.conditional_1.matrix;
    CHECK(max_abs_diff(mix, res.state.matrix) <= 1e-12);
  }
}

TEST_CASE("channel_twirl_step is the matched-control sandwich") {
  const QuditRegister reg{2, 2};
  RngHandle rng(43);
  const ComplexMatrix u = haar_unitary(2, rng);
  const ComplexMatrix w = kron_power(u, 2);
  // The identity channel is a fixed point: W†(WρW†)W = ρ.
  const ComplexMatrix id16 = ComplexMatrix::Identity(16, 16);
  CHECK(max_abs_diff(channel_twirl_step(id16, u, reg), id16) <= 1e-12);

  // General channel: output is ½[Λ(ρ) + W†Λ(WρW†)W].
  const ComplexMatrix v = haar_unitary(4, rng);
  const ComplexMatrix lambda = kron(v.conjugate(), v);  // conjugation by v
  const ComplexMatrix stepped = channel_twirl_step(lambda, u, reg);
  const DensityMatrix rho = random_state(reg, rng);
  const ComplexMatrix direct =
      0.5 * (v * rho.matrix * v.adjoint() +
             w.adjoint() * v * w * rho.matrix * w.adjoint() * v.adjoint() * w);
  CHECK(max_abs_diff(unvec(stepped * vec(rho.matrix), 4), direct) <= 1e-12);
}

TEST_CASE("stabilizer_depolarize equals the normalized group sum") {
  // GHZ stabilizer example on three qubits.
  const QuditRegister reg{3, 2};
  const ComplexMatrix x = pauli_matrix(PauliAxis::X);
  const ComplexMatrix z = pauli_matrix(PauliAxis::Z);
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  const std::vector<ComplexMatrix> gens = {
      kron(kron(x, x), x), kron(kron(z, z), i2), kron(kron(i2, z), z)};

  RngHandle rng(44);
  const DensityMatrix rho = DensityMatrix{hs_random_density_matrix(8, rng)};
  const DensityMatrix seq = stabilizer_depolarize(rho, gens);

  // Brute-force: average over all 8 group elements.
  ComplexMatrix acc = ComplexMatrix::Zero(8, 8);
  for (int mask = 0; mask < 8; ++mask) {
    ComplexMatrix g = ComplexMatrix::Identity(8, 8);
    for (int b = 0; b < 3; ++b)
      if (mask & (1 << b)) g = g * gens[b];
    acc += g * rho.matrix * g.adjoint();
  }
  CHECK(max_abs_diff(seq.matrix, acc / 8.0) <= 1e-12);
}

TEST_CASE("stabilizer_depolarize rejects non-commuting generators") {
  const ComplexMatrix x = pauli_matrix(PauliAxis::X);
  const ComplexMatrix z = pauli_matrix(PauliAxis::Z);
  RngHandle rng(45);
  const DensityMatrix rho = DensityMatrix{hs_random_density_matrix(2, rng)};
  CHECK_THROWS_AS(stabilizer_depolarize(rho, {x, z}), std::invalid_argument);
}
