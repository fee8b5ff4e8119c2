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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "test_helpers.hpp"
#include "twirlkit/io.hpp"

using namespace twirlkit;
using twirlkit::test::max_abs_diff;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("format_double round trips doubles exactly") {
  for (double x : {0.0, 1.0 / 3.0, -2.5e-17, 59.0, 1e300}) {
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_CASE("matrix json round trip is bit exact") {
  RngHandle rng(101);
  const ComplexMatrix a = test::random_matrix(3, 4, rng);
  const ComplexMatrix back = matrix_from_json(matrix_to_json(a));
  CHECK((a.array() == back.array()).all());
}

TEST_CASE("matrix file round trip") {
  const std::string path = temp_path("twirlkit_test_matrix.json");
  RngHandle rng(102);
  const ComplexMatrix a = test::random_matrix(4, 4, rng);
  save_matrix(a, path);
  const ComplexMatrix back = load_matrix(path);
  CHECK((a.array() == back.array()).all());
  std::remove(path.c_str());
}

TEST_CASE("malformed matrix json raises ParseError") {
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json{{"rows", 2}}), ParseError);
  nlohmann::json bad = {{"rows", 2}, {"cols", 2}, {"data", {{1.0, 0.0}}}};
  CHECK_THROWS_AS(matrix_from_json(bad), ParseError);

  const std::string path = temp_path("twirlkit_test_bad.json");
  std::ofstream(path) << "{not json";
  CHECK_THROWS_AS(load_matrix(path), ParseError);
  std::remove(path.c_str());
}

TEST_CASE("superoperator file round trip keeps register shape") {
  const QuditRegister reg{2, 2};
  const PermutationBasis basis = build_permutation_basis(reg);
  const Superoperator sp = exact_twirl_superop(reg, basis);
  const std::string path = temp_path("twirlkit_test_superop.json");
  save_superop(sp, path);
  const Superoperator back = load_superop(path);
  CHECK(back.reg.n_qudits == 2);
  CHECK(back.reg.local_dim == 2);
  CHECK((sp.matrix.array() == back.matrix.array()).all());
  std::remove(path.c_str());
}

TEST_CASE("superop_from_json rejects inconsistent dimensions") {
  const QuditRegister reg{2, 2};
  const PermutationBasis basis = build_permutation_basis(reg);
  nlohmann::json j = superop_to_json(exact_twirl_superop(reg, basis));
  j["n_qudits"] = 3;
  CHECK_THROWS_AS(superop_from_json(j), ParseError);
}

TEST_CASE("parse_source handles every kind") {
  const UnitarySource haar = parse_source("haar", 3);
  CHECK(haar.kind == SourceKind::Haar);
  CHECK(haar.dim == 3);

  const UnitarySource biased = parse_source("biased:pg=0.5,g=delta", 2);
  CHECK(biased.kind == SourceKind::Biased);
  CHECK(biased.p_g == 0.5);
  CHECK(biased.g.kind == GSpec::Kind::DeltaAt);
  // Delta target is the fixed Haar draw at seed 0, so reparsing matches.
  const UnitarySource again = parse_source("biased:pg=0.5,g=delta", 2);
  CHECK(max_abs_diff(biased.g.fixed_unitary, again.g.fixed_unitary) == 0.0);

  const UnitarySource narrow = parse_source("biased:pg=0.25,g=narrow,eps=0.05", 2);
  CHECK(narrow.g.kind == GSpec::Kind::NarrowHaar);
  CHECK(narrow.g.angle_scale == 0.05);

  const UnitarySource ising = parse_source("ising:alpha=1.10,n=3", 8);
  CHECK(ising.kind == SourceKind::Ising);
  CHECK(ising.ising_qubits == 3);
  CHECK(ising.ising_alpha == 1.10);

  CHECK_THROWS_AS(parse_source("bogus", 2), ParseError);
  CHECK_THROWS_AS(parse_source("biased:pg=oops", 2), ParseError);
}

TEST_CASE("parse_source cycle reads a matrix list file") {
  const std::string path = temp_path("twirlkit_test_cycle.json");
  const ComplexMatrix a = pauli_rotation(PauliAxis::X, 0.5);
  const ComplexMatrix b = pauli_rotation(PauliAxis::Z, 0.5);
  nlohmann::json list = nlohmann::json::array();
  list.push_back(matrix_to_json(a));
  list.push_back(matrix_to_json(b));
  std::ofstream(path) << list.dump();

  const UnitarySource src = parse_source("cycle:" + path, 2);
  CHECK(src.kind == SourceKind::DeterministicCycle);
  REQUIRE(src.cycle.size() == 2);
  CHECK(max_abs_diff(src.cycle[0], a) == 0.0);
  CHECK(max_abs_diff(src.cycle[1], b) == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("source_to_string round trips through parse_source") {
  for (const std::string text :
       {std::string("haar"), std::string("biased:pg=0.5,g=delta"),
        std::string("ising:alpha=1.1,n=3")}) {
    const Eigen::Index dim = text.rfind("ising", 0) == 0 ? 8 : 2;
    const UnitarySource src = parse_source(text, dim);
    const UnitarySource back = parse_source(source_to_string(src), dim);
    CHECK(back.kind == src.kind);
    CHECK(back.p_g == src.p_g);
    CHECK(back.ising_qubits == src.ising_qubits);
  }
}

TEST_CASE("error curve csv has the documented schema") {
  ErrorCurve curve;
  curve.config.reg = {2, 2};
  curve.config.source = UnitarySource::haar(2);
  curve.records.push_back({0, 14.0, 0.1, 14.0});
  curve.records.push_back({1, 7.2, 0.05, std::nullopt});
  const std::string path = temp_path("twirlkit_test_curve.csv");
  write_error_curve_csv(curve, path);
  const std::string text = slurp(path);
  std::istringstream lines(text);
  std::string header, row0, row1;
  std::getline(lines, header);
  std::getline(lines, row0);
  std::getline(lines, row1);
  CHECK(header == "iteration,mean_sq_error,std_error,theory");
  CHECK(row0.rfind("0,", 0) == 0);
  CHECK(row0.find("14") != std::string::npos);
  // Absent theory leaves the last column empty.
  CHECK(row1.back() == ',');
  std::remove(path.c_str());
}

TEST_CASE("metadata echoes the configuration") {
  ErrorCurve curve;
  curve.config.reg = {3, 2};
  curve.config.m_max = 12;
  curve.config.seed = 99;
  curve.config.trajectories = 10;
  curve.config.source = UnitarySource::haar(2);
  const std::string path = temp_path("twirlkit_test_meta.json");
  write_error_curve_metadata(curve, path);
  const nlohmann::json j = nlohmann::json::parse(slurp(path));
  CHECK(j.contains("version"));
  CHECK(j.contains("timestamp_unix"));
  CHECK(j["seed"].get<std::uint64_t>() == 99);
  CHECK(j["n_qudits"].get<int>() == 3);
  CHECK(j["m_max"].get<int>() == 12);
  std::remove(path.c_str());
}
