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

#include "twirlkit/io.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "twirlkit/version.hpp"

namespace twirlkit {

using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

json matrix_to_json(const ComplexMatrix& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      data.push_back({m(i, j).real(), m(i, j).imag()});
    }
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("data")) {
    throw ParseError("matrix: expected object with rows, cols, data");
  }
  const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
  const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
  const json& data = j.at("data");
  if (rows < 0 || cols < 0 ||
      static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw ParseError("matrix: data length does not match rows*cols");
  }
  ComplexMatrix m(rows, cols);
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j2 = 0; j2 < cols; ++j2, ++idx) {
      const json& entry = data.at(static_cast<std::size_t>(idx));
      if (!entry.is_array() || entry.size() != 2) {
        throw ParseError("matrix: entries must be [re, im] pairs");
      }
      m(i, j2) = Complex(entry.at(0).get<double>(), entry.at(1).get<double>());
    }
  }
  return m;
}

namespace {

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace

ComplexMatrix load_matrix(const std::string& path) {
  try {
    return matrix_from_json(load_json_file(path));
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void save_matrix(const ComplexMatrix& m, const std::string& path) {
  write_json_file(matrix_to_json(m), path);
}

json superop_to_json(const Superoperator& s) {
  json j = matrix_to_json(s.matrix);
  j["kind"] = "superoperator";
  j["n_qudits"] = s.reg.n_qudits;
  j["local_dim"] = s.reg.local_dim;
  return j;
}

Superoperator superop_from_json(const json& j) {
  if (j.value("kind", "") != "superoperator") {
    throw ParseError("superoperator: missing kind annotation");
  }
  Superoperator s;
  s.reg.n_qudits = j.at("n_qudits").get<int>();
  s.reg.local_dim = j.at("local_dim").get<Eigen::Index>();
  s.matrix = matrix_from_json(j);
  const Eigen::Index expected = s.reg.dim() * s.reg.dim();
  if (s.matrix.rows() != expected || s.matrix.cols() != expected) {
    throw ParseError("superoperator: matrix does not match (N, d)");
  }
  return s;
}

Superoperator load_superop(const std::string& path) {
  try {
    return superop_from_json(load_json_file(path));
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void save_superop(const Superoperator& s, const std::string& path) {
  write_json_file(superop_to_json(s), path);
}

std::vector<ComplexMatrix> load_matrix_list(const std::string& path) {
  const json j = load_json_file(path);
  if (!j.is_array()) throw ParseError(path + ": expected a JSON array");
  std::vector<ComplexMatrix> out;
  for (const json& item : j) out.push_back(matrix_from_json(item));
  return out;
}

namespace {

// key=value pairs after "kind:".
std::vector<std::pair<std::string, std::string>> parse_params(
    const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) {
      out.emplace_back(item, "");
    } else {
      out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    }
    pos = comma + 1;
  }
  return out;
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double x = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw ParseError("source: bad numeric value for " + key + ": " + value);
  }
}

int to_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const int x = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw ParseError("source: bad integer value for " + key + ": " + value);
  }
}

}  // namespace

UnitarySource parse_source(const std::string& text, Eigen::Index dim) {
  const std::size_t colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string rest =
      colon == std::string::npos ? "" : text.substr(colon + 1);

  if (kind == "haar") return UnitarySource::haar(dim);
  if (kind == "cycle") {
    if (rest.empty()) throw ParseError("source: cycle needs a file path");
    return UnitarySource::deterministic_cycle(load_matrix_list(rest));
  }
  if (kind == "ising") {
    double alpha = 1.10;
    int n = 0;
    for (const auto& [key, value] : parse_params(rest)) {
      if (key == "alpha") alpha = to_double(key, value);
      else if (key == "n") n = to_int(key, value);
      else throw ParseError("source: unknown ising parameter " + key);
    }
    if (n == 0) throw ParseError("source: ising needs n=<qubits>");
    return UnitarySource::ising(n, alpha);
  }
  if (kind == "biased") {
    double p_g = 0.5;
    std::string g_kind = "delta";
    double eps = 0.1;
    for (const auto& [key, value] : parse_params(rest)) {
      if (key == "pg") p_g = to_double(key, value);
      else if (key == "g") g_kind = value;
      else if (key == "eps") eps = to_double(key, value);
      else throw ParseError("source: unknown biased parameter " + key);
    }
    GSpec g;
    if (g_kind == "delta") {
      // Fixed Haar draw at seed 0: the documented default delta target.
      RngHandle rng(0);
      g = GSpec::delta_at(haar_unitary(dim, rng));
    } else if (g_kind == "narrow") {
      g = GSpec::narrow_haar(eps);
    } else {
      throw ParseError("source: unknown g kind " + g_kind);
    }
    return UnitarySource::biased(dim, p_g, g);
  }
  throw ParseError("source: unknown kind " + kind);
}

std::string source_to_string(const UnitarySource& source) {
  switch (source.kind) {
    case SourceKind::Haar:
      return "haar";
    case SourceKind::Biased: {
      std::string g = source.g.kind == GSpec::Kind::DeltaAt
                          ? "delta"
                          : "narrow:eps=" + format_double(source.g.angle_scale);
      return "biased:pg=" + format_double(source.p_g) + ",g=" + g;
    }
    case SourceKind::DeterministicCycle:
      return "cycle[" + std::to_string(source.cycle.size()) + "]";
    case SourceKind::Ising:
      return "ising:alpha=" + format_double(source.ising_alpha) +
             ",n=" + std::to_string(source.ising_qubits);
  }
  return "unknown";
}

json config_to_json(const ExperimentConfig& cfg) {
  return json{
      {"n_qudits", cfg.reg.n_qudits},
      {"local_dim", cfg.reg.local_dim},
      {"mode", cfg.mode == RunMode::State ? "state" : "superoperator"},
      {"algorithm", cfg.algorithm == Algorithm::Recursive      ? "recursive"
                    : cfg.algorithm == Algorithm::PlainAverage ? "plain-average"
                                                               : "no-mixing"},
      {"variant",
       cfg.variant == TwirlVariant::Werner ? "werner" : "isotropic"},
      {"branches", cfg.branches},
      {"m_max", cfg.m_max},
      {"source", source_to_string(cfg.source)},
      {"trajectories", cfg.trajectories},
      {"seed", cfg.seed},
      {"metric",
       cfg.metric == ErrorMetric::RawMse ? "raw-mse" : "normalized"},
      {"num_states",
       cfg.states.empty() ? cfg.num_states
                          : static_cast<int>(cfg.states.size())},
  };
}

void write_error_curve_csv(const ErrorCurve& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << "iteration,mean_sq_error,std_error,theory\n";
  for (const ErrorCurveRecord& rec : curve.records) {
    out << rec.iteration << ',' << format_double(rec.mean_sq_error) << ','
        << format_double(rec.std_error) << ',';
    if (rec.theory) out << format_double(*rec.theory);
    out << '\n';
  }
}

void write_error_curve_metadata(const ErrorCurve& curve,
                                const std::string& path) {
  json meta = config_to_json(curve.config);
  meta["version"] = kVersion;
  meta["records"] = curve.records.size();
  // The only field that is not byte-stable across reruns.
  meta["timestamp_unix"] =
      std::chrono::duration_cast<std::chrono::seconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count();
  write_json_file(meta, path);
}

}  // namespace twirlkit
