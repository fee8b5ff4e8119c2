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

#ifndef TWIRLKIT_IO_HPP
#define TWIRLKIT_IO_HPP

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "twirlkit/experiments.hpp"

namespace twirlkit {

// Raised on malformed input files (bad JSON, shape mismatches).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 17-significant-digit decimal, exact at double precision.
std::string format_double(double x);

// Matrix file format: {"rows": R, "cols": C, "data": [[re, im], ...]},
// entries row by row, left to right.
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

ComplexMatrix load_matrix(const std::string& path);
void save_matrix(const ComplexMatrix& m, const std::string& path);

// Same format with "kind": "superoperator" plus the (N, d) pair.
nlohmann::json superop_to_json(const Superoperator& s);
Superoperator superop_from_json(const nlohmann::json& j);
Superoperator load_superop(const std::string& path);
void save_superop(const Superoperator& s, const std::string& path);

// JSON array of matrix objects (deterministic-cycle source files).
std::vector<ComplexMatrix> load_matrix_list(const std::string& path);

// Source strings: haar | biased:pg=0.5,g=delta | cycle:<file> |
// ising:alpha=1.10,n=3. The delta target defaults to a fixed Haar draw at
// seed 0; g=narrow:eps=0.1 selects the narrow-haar component.
UnitarySource parse_source(const std::string& text, Eigen::Index dim);
std::string source_to_string(const UnitarySource& source);

nlohmann::json config_to_json(const ExperimentConfig& cfg);

// CSV schema: iteration,mean_sq_error,std_error,theory (theory empty when
// no closed form applies).
void write_error_curve_csv(const ErrorCurve& curve, const std::string& path);

// Config echo plus seed, software version, and a timestamp field (the one
// byte-unstable field).
void write_error_curve_metadata(const ErrorCurve& curve,
                                const std::string& path);

}  // namespace twirlkit

#endif  // TWIRLKIT_IO_HPP
