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

#ifndef TWIRLKIT_SAMPLING_HPP
#define TWIRLKIT_SAMPLING_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "twirlkit/linalg.hpp"

namespace twirlkit {

// Seedable random stream. A (seed, stream_id) pair fully determines the
// sample sequence; parallel workers each own a handle derived with a
// distinct stream_id (typically the trajectory index).
class RngHandle {
 public:
  explicit RngHandle(std::uint64_t seed, std::uint64_t stream_id = 0);

  // Fresh handle on the same master seed with a different stream.
  RngHandle stream(std::uint64_t stream_id) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  double normal();
  double uniform();  // in [0, 1)
  Complex complex_normal();  // E|z|^2 = 1

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// splitmix64 finalizer; used to mix (seed, stream_id) into engine seeds.
std::uint64_t mix64(std::uint64_t x);

// i.i.d. standard complex Gaussian entries (E|g_ij|^2 = 1).
ComplexMatrix ginibre(Eigen::Index rows, Eigen::Index cols, RngHandle& rng);

// Haar-uniform unitary: QR of a Ginibre matrix with the phases of R's
// diagonal absorbed into Q so that R has positive real diagonal.
ComplexMatrix haar_unitary(Eigen::Index d, RngHandle& rng);

// Haar sample projected to det = 1 via the principal d-th root of det(U).
ComplexMatrix special_unitary(Eigen::Index d, RngHandle& rng);

// rho = GG†/Tr(GG†): uniform w.r.t. the Hilbert-Schmidt measure.
ComplexMatrix hs_random_density_matrix(Eigen::Index dim, RngHandle& rng);

// Random n-qubit unitary built from one layer of single-qubit Haar
// unitaries followed by the diagonal evolution
// exp(iα Σ_k σ_z^{(k)} σ_z^{(k+1)}) with periodic boundary.
ComplexMatrix ising_unitary(int n_qubits, double alpha, RngHandle& rng);

// Shape of the biased component g(U) in f(U) = p_g g(U) + (1 - p_g).
struct GSpec {
  enum class Kind { DeltaAt, NarrowHaar };

  Kind kind = Kind::DeltaAt;
  ComplexMatrix fixed_unitary;      // delta-at
  double angle_scale = 0.1;         // narrow-haar: generator scaled by this

  static GSpec delta_at(ComplexMatrix v);
  static GSpec narrow_haar(double angle_scale);
};

enum class SourceKind { Haar, Biased, DeterministicCycle, Ising };

struct UnitarySource {
  SourceKind kind = SourceKind::Haar;
  Eigen::Index dim = 2;  // ignored by deterministic-cycle and ising

  // biased
  double p_g = 0.0;
  GSpec g;

  // deterministic-cycle
  std::vector<ComplexMatrix> cycle;

  // ising
  int ising_qubits = 0;
  double ising_alpha = 1.10;

  static UnitarySource haar(Eigen::Index d);
  static UnitarySource biased(Eigen::Index d, double p_g, GSpec g);
  static UnitarySource deterministic_cycle(std::vector<ComplexMatrix> unitaries);
  static UnitarySource ising(int n_qubits, double alpha);

  Eigen::Index unitary_dim() const;
  void validate() const;
};

// Draw the unitary for iteration step `step` (deterministic sources cycle
// through their list; random sources consume the stream).
ComplexMatrix draw_unitary(const UnitarySource& source, int step,
                           RngHandle& rng);

}  // namespace twirlkit

#endif  // TWIRLKIT_SAMPLING_HPP
