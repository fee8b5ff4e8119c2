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

#ifndef TWIRLKIT_EXPERIMENTS_HPP
#define TWIRLKIT_EXPERIMENTS_HPP

#include <optional>
#include <string>
#include <vector>

#include "twirlkit/superop.hpp"

namespace twirlkit {

enum class RunMode { State, Superoperator };

// How each trajectory evolves:
//   Recursive    — Q_{K,M}, the ½-mixing step iterated
//   PlainAverage — P_M, running average of rotated copies
//   NoMixing     — bare conjugations, no mixing (flat-error baseline)
enum class Algorithm { Recursive, PlainAverage, NoMixing };

enum class ErrorMetric { RawMse, Normalized };

struct ExperimentConfig {
  QuditRegister reg;
  RunMode mode = RunMode::Superoperator;
  Algorithm algorithm = Algorithm::Recursive;
  TwirlVariant variant = TwirlVariant::Werner;
  int branches = 2;  // K
  int m_max = 0;
  UnitarySource source;
  int trajectories = 1;
  std::uint64_t seed = 0;
  ErrorMetric metric = ErrorMetric::RawMse;

  // State mode: explicit states, or this many HS-random ones drawn from a
  // dedicated stream; trajectory t uses state t mod count.
  std::vector<DensityMatrix> states;
  int num_states = 1;

  int threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

struct ErrorCurveRecord {
  int iteration;
  double mean_sq_error;
  double std_error;
  std::optional<double> theory;
};

struct ErrorCurve {
  std::vector<ErrorCurveRecord> records;
  ExperimentConfig config;
};

// Evolves every trajectory to m_max, recording the squared HS error
// against the exact twirl reference at each iteration, then aggregates
// mean and standard error in trajectory-index order (schedule
// independent). A matching closed-form theory value is attached when one
// exists for the source and algorithm.
ErrorCurve run_convergence(const ExperimentConfig& cfg);

struct DecayFit {
  double rate_bits_per_iteration;  // positive = decay
  double goodness;                 // coefficient of determination
};

// Least-squares slope of log2(mean error) over iterations in
// [window_lo, window_hi]; throws if any windowed mean is non-positive.
DecayFit fit_decay_rate(const ErrorCurve& curve, int window_lo, int window_hi);
DecayFit fit_decay_rate(const std::vector<double>& x,
                        const std::vector<double>& values);

enum class FigureId { Fig2, Fig3a, Fig3b, Fig4a, Fig4b };

ExperimentConfig figure_preset(FigureId id, std::uint64_t seed);

// Runs the preset and writes <prefix>.csv and <prefix>.meta.json.
ErrorCurve reproduce(FigureId id, std::uint64_t seed,
                     const std::string& output_prefix, int threads = 0);

FigureId parse_figure_id(const std::string& name);
std::string figure_name(FigureId id);

}  // namespace twirlkit

#endif  // TWIRLKIT_EXPERIMENTS_HPP
