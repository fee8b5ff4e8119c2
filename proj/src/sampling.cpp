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

#include "twirlkit/sampling.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace twirlkit {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngHandle::RngHandle(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id),
      engine_(mix64(seed ^ mix64(stream_id))) {}

RngHandle RngHandle::stream(std::uint64_t stream_id) const {
  return RngHandle(seed_, stream_id);
}

double RngHandle::normal() { return normal_(engine_); }

double RngHandle::uniform() { return uniform_(engine_); }

Complex RngHandle::complex_normal() {
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return Complex(re, im) / std::sqrt(2.0);
}

ComplexMatrix ginibre(Eigen::Index rows, Eigen::Index cols, RngHandle& rng) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("ginibre: dimensions must be positive");
  }
  ComplexMatrix g(rows, cols);
  // Column-major fill so the draw order matches the storage order.
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      g(i, j) = rng.complex_normal();
    }
  }
  return g;
}

ComplexMatrix haar_unitary(Eigen::Index d, RngHandle& rng) {
  if (d < 1) {
    throw std::invalid_argument("haar_unitary: dimension must be positive");
  }
  const ComplexMatrix g = ginibre(d, d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the QR gauge: scale each column so R's diagonal is positive real.
  for (Eigen::Index j = 0; j < d; ++j) {
    const Complex rj = r(j, j);
    q.col(j) *= rj / std::abs(rj);
  }
  return q;
}

ComplexMatrix special_unitary(Eigen::Index d, RngHandle& rng) {
  ComplexMatrix u = haar_unitary(d, rng);
  const double phase = std::arg(u.determinant());
  u *= std::exp(Complex(0, -phase / static_cast<double>(d)));
  return u;
}

ComplexMatrix hs_random_density_matrix(Eigen::Index dim, RngHandle& rng) {
  if (dim < 1) {
    throw std::invalid_argument("hs_random_density_matrix: dim must be positive");
  }
  const ComplexMatrix g = ginibre(dim, dim, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

ComplexMatrix ising_unitary(int n_qubits, double alpha, RngHandle& rng) {
  if (n_qubits < 2) {
    throw std::invalid_argument("ising_unitary: need at least 2 qubits");
  }
  ComplexMatrix locals = ComplexMatrix::Identity(1, 1);
  for (int k = 0; k < n_qubits; ++k) {
    locals = kron(locals, haar_unitary(2, rng));
  }
  const Eigen::Index dim = Eigen::Index(1) << n_qubits;
  // The Ising factor is diagonal in the computational basis: phase
  // e^{iα s} with s = Σ_k z_k z_{k+1}, z ∈ {±1}, periodic boundary.
  ComplexMatrix u(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    int s = 0;
    for (int k = 0; k < n_qubits; ++k) {
      const int zk = ((col >> (n_qubits - 1 - k)) & 1) ? -1 : 1;
      const int zk1 = ((col >> (n_qubits - 1 - (k + 1) % n_qubits)) & 1) ? -1 : 1;
      s += zk * zk1;
    }
    u.row(col) = std::exp(Complex(0, alpha * s)) * locals.row(col);
  }
  return u;
}

GSpec GSpec::delta_at(ComplexMatrix v) {
  require_unitary(v);
  GSpec g;
  g.kind = Kind::DeltaAt;
  g.fixed_unitary = std::move(v);
  return g;
}

GSpec GSpec::narrow_haar(double angle_scale) {
  if (angle_scale <= 0) {
    throw std::invalid_argument("narrow_haar: angle scale must be positive");
  }
  GSpec g;
  g.kind = Kind::NarrowHaar;
  g.angle_scale = angle_scale;
  return g;
}

UnitarySource UnitarySource::haar(Eigen::Index d) {
  UnitarySource s;
  s.kind = SourceKind::Haar;
  s.dim = d;
  return s;
}

UnitarySource UnitarySource::biased(Eigen::Index d, double p_g, GSpec g) {
  UnitarySource s;
  s.kind = SourceKind::Biased;
  s.dim = d;
  s.p_g = p_g;
  s.g = std::move(g);
  s.validate();
  return s;
}

UnitarySource UnitarySource::deterministic_cycle(
    std::vector<ComplexMatrix> unitaries) {
  UnitarySource s;
  s.kind = SourceKind::DeterministicCycle;
  s.cycle = std::move(unitaries);
  s.validate();
  s.dim = s.cycle.front().rows();
  return s;
}

UnitarySource UnitarySource::ising(int n_qubits, double alpha) {
  UnitarySource s;
  s.kind = SourceKind::Ising;
  s.ising_qubits = n_qubits;
  s.ising_alpha = alpha;
  s.validate();
  s.dim = Eigen::Index(1) << n_qubits;
  return s;
}

Eigen::Index UnitarySource::unitary_dim() const {
  switch (kind) {
    case SourceKind::DeterministicCycle:
      return cycle.empty() ? 0 : cycle.front().rows();
    case SourceKind::Ising:
      return Eigen::Index(1) << ising_qubits;
    default:
      return dim;
  }
}

void UnitarySource::validate() const {
  switch (kind) {
    case SourceKind::Haar:
      if (dim < 1) throw std::invalid_argument("source: dim must be positive");
      break;
    case SourceKind::Biased:
      if (dim < 1) throw std::invalid_argument("source: dim must be positive");
      if (p_g < 0.0 || p_g > 1.0) {
        throw std::invalid_argument("source: p_g must lie in [0, 1]");
      }
      if (g.kind == GSpec::Kind::DeltaAt) {
        if (g.fixed_unitary.rows() != dim) {
          throw std::invalid_argument("source: delta target dim mismatch");
        }
        require_unitary(g.fixed_unitary);
      }
      break;
    case SourceKind::DeterministicCycle:
      if (cycle.empty()) {
        throw std::invalid_argument("source: cycle list is empty");
      }
      for (const auto& u : cycle) require_unitary(u);
      break;
    case SourceKind::Ising:
      if (ising_qubits < 2) {
        throw std::invalid_argument("source: ising needs >= 2 qubits");
      }
      break;
  }
}

namespace {

// exp(i ε H) where H is the Hermitian generator of a Haar unitary with
// eigenphases taken in (-π, π].
ComplexMatrix narrow_haar_sample(Eigen::Index d, double scale, RngHandle& rng) {
  const ComplexMatrix u = haar_unitary(d, rng);
  Eigen::ComplexEigenSolver<ComplexMatrix> es(u);
  const ComplexVector lambda = es.eigenvalues();
  const ComplexMatrix w = es.eigenvectors();
  ComplexVector shrunk(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    shrunk(k) = std::exp(Complex(0, scale * std::arg(lambda(k))));
  }
  ComplexMatrix out = w * shrunk.asDiagonal() * w.inverse();
  return out;
}

}  // namespace

ComplexMatrix draw_unitary(const UnitarySource& source, int step,
                           RngHandle& rng) {
  switch (source.kind) {
    case SourceKind::Haar:
      return haar_unitary(source.dim, rng);
    case SourceKind::Biased: {
      // Degenerate mixtures skip the branch draw, so p_g = 0 consumes the
      // stream exactly like a haar source.
      const bool from_g =
          source.p_g > 0.0 &&
          (source.p_g >= 1.0 || rng.uniform() < source.p_g);
      if (!from_g) return haar_unitary(source.dim, rng);
      if (source.g.kind == GSpec::Kind::DeltaAt) return source.g.fixed_unitary;
      return narrow_haar_sample(source.dim, source.g.angle_scale, rng);
    }
    case SourceKind::DeterministicCycle:
      return source.cycle[static_cast<std::size_t>(step) % source.cycle.size()];
    case SourceKind::Ising:
      return ising_unitary(source.ising_qubits, source.ising_alpha, rng);
  }
  throw std::logic_error("draw_unitary: unreachable");
}

}  // namespace twirlkit
