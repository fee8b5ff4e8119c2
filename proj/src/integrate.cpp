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

#include "twirlkit/integrate.hpp"

#include <cmath>

namespace twirlkit {

namespace {

Eigen::Index total_dim(int m, int n, Eigen::Index d) {
  Eigen::Index dim = 1;
  for (int k = 0; k < m + n; ++k) {
    if (dim > kMomentDimGuard / d) {
      throw GuardError("moment operator: d^(m+n) exceeds guard");
    }
    dim *= d;
  }
  return dim;
}

}  // namespace

MomentOperator moment_operator(int m, int n, Eigen::Index d, int iters,
                               RngHandle& rng, UnitaryGroup group) {
  if (m < 0 || n < 0) {
    throw std::invalid_argument("moment operator: negative factor count");
  }
  if (d < 1) throw std::invalid_argument("moment operator: d must be positive");
  if (iters < 0) throw std::invalid_argument("moment operator: negative iters");
  const Eigen::Index dim = total_dim(m, n, d);

  MomentOperator mop{m, n, d, ComplexMatrix::Identity(dim, dim), 0, {}};
  mop.step_deltas.reserve(static_cast<std::size_t>(iters));
  // Iterate with the entrywise-conjugate factors U^⊗m ⊗ (U*)^⊗n: these
  // form a representation (products of factors are again factors), so
  // the halving product converges a.s. to its Haar average. The target
  // U^⊗m ⊗ (U†)^⊗n average is recovered below by transposing the last n
  // tensor slots. Iterating with U† directly does not converge: those
  // factors do not close under multiplication and the product decays to
  // zero instead.
  for (int k = 0; k < iters; ++k) {
    const ComplexMatrix u = group == UnitaryGroup::Full
                                ? haar_unitary(d, rng)
                                : special_unitary(d, rng);
    const ComplexMatrix factor =
        kron(kron_power(u, m), kron_power(u.conjugate(), n));
    ComplexMatrix next = 0.5 * (mop.matrix + factor * mop.matrix);
    mop.step_deltas.push_back(std::sqrt(hs_norm_sq(next - mop.matrix)));
    mop.matrix = std::move(next);
    ++mop.iterations_done;
  }
  // Partial transpose on the trailing n factors.
  Eigen::Index dm = 1;
  for (int k = 0; k < m; ++k) dm *= d;
  const Eigen::Index dn = dim / dm;
  ComplexMatrix out(dim, dim);
  for (Eigen::Index a = 0; a < dm; ++a) {
    for (Eigen::Index b = 0; b < dn; ++b) {
      for (Eigen::Index a2 = 0; a2 < dm; ++a2) {
        for (Eigen::Index b2 = 0; b2 < dn; ++b2) {
          out(a * dn + b, a2 * dn + b2) = mop.matrix(a * dn + b2, a2 * dn + b);
        }
      }
    }
  }
  mop.matrix = std::move(out);
  return mop;
}

MomentOperator moment_operator_averaged(int m, int n, Eigen::Index d,
                                        int iters, int runs,
                                        const RngHandle& rng,
                                        UnitaryGroup group) {
  if (runs < 1) throw std::invalid_argument("moment operator: need runs >= 1");
  MomentOperator acc;
  for (int run = 0; run < runs; ++run) {
    RngHandle stream = rng.stream(rng.stream_id() + static_cast<std::uint64_t>(run));
    MomentOperator mop = moment_operator(m, n, d, iters, stream, group);
    if (run == 0) {
      acc = std::move(mop);
    } else {
      acc.matrix += mop.matrix;
      // Keep the worst per-step diagnostic across runs.
      for (std::size_t k = 0; k < acc.step_deltas.size(); ++k) {
        acc.step_deltas[k] = std::max(acc.step_deltas[k], mop.step_deltas[k]);
      }
    }
  }
  acc.matrix /= static_cast<double>(runs);
  return acc;
}

Complex trace_integral(const std::vector<ComplexMatrix>& a_list,
                       const std::vector<ComplexMatrix>& b_list,
                       const MomentOperator& mop) {
  if (static_cast<int>(a_list.size()) != mop.u_factors ||
      static_cast<int>(b_list.size()) != mop.udag_factors) {
    throw std::invalid_argument("trace_integral: list lengths mismatch (m, n)");
  }
  ComplexMatrix tensor = ComplexMatrix::Identity(1, 1);
  for (const ComplexMatrix& a : a_list) {
    if (a.rows() != mop.local_dim || a.cols() != mop.local_dim) {
      throw std::invalid_argument("trace_integral: A size mismatch");
    }
    tensor = kron(tensor, a);
  }
  for (const ComplexMatrix& b : b_list) {
    if (b.rows() != mop.local_dim || b.cols() != mop.local_dim) {
      throw std::invalid_argument("trace_integral: B size mismatch");
    }
    tensor = kron(tensor, b);
  }
  return (mop.matrix * tensor).trace();
}

}  // namespace twirlkit
