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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "twirlkit/experiments.hpp"
#include "twirlkit/integrate.hpp"
#include "twirlkit/io.hpp"
#include "twirlkit/superop.hpp"
#include "twirlkit/twirl.hpp"
#include "twirlkit/version.hpp"

namespace {

using nlohmann::json;
using namespace twirlkit;

// Exit codes: 2 bad flags, 3 file parse, 4 dimension guard, 5 validation.
constexpr int kExitFlags = 2;
constexpr int kExitParse = 3;
constexpr int kExitGuard = 4;
constexpr int kExitValidation = 5;

int env_threads() {
  if (const char* v = std::getenv("TWIRLKIT_THREADS")) return std::atoi(v);
  return 0;
}

// Relative output paths land in TWIRLKIT_OUTDIR when set.
std::string out_path(const std::string& path) {
  const char* dir = std::getenv("TWIRLKIT_OUTDIR");
  if (dir == nullptr || path.empty() ||
      std::filesystem::path(path).is_absolute()) {
    return path;
  }
  return (std::filesystem::path(dir) / path).string();
}

void emit_error(const std::string& type, const std::string& message,
                int code) {
  std::cerr << json{{"error",
                     {{"type", type}, {"message", message}, {"code", code}}}}
                   .dump()
            << '\n';
}

struct TwirlRunOptions {
  std::string input, output;
  int n = 2;
  Eigen::Index d = 2;
  int iterations = 0;
  int branches = 2;
  std::string source = "haar";
  std::string variant = "werner";
  std::uint64_t seed = 0;
};

json resolved_params(std::initializer_list<std::pair<std::string, json>> kv) {
  json j;
  for (const auto& [k, v] : kv) j[k] = v;
  j["version"] = kVersion;
  return j;
}

int run_twirl_exact(const std::string& input, const std::string& output,
                    int n, Eigen::Index d, const std::string& variant) {
  const QuditRegister reg{n, d};
  const DensityMatrix rho{load_matrix(input)};
  rho.validate();
  DensityMatrix out;
  if (variant == "isotropic") {
    out = exact_isotropic_twirl(rho, reg);
  } else {
    out = exact_twirl(rho, build_permutation_basis(reg));
  }
  save_matrix(out.matrix, out_path(output));
  std::cout << resolved_params({{"verb", "twirl exact"},
                                {"input", input},
                                {"out", output},
                                {"n", n},
                                {"d", d},
                                {"variant", variant}})
                   .dump()
            << '\n';
  return 0;
}

int run_twirl_run(const TwirlRunOptions& opt) {
  const QuditRegister reg{opt.n, opt.d};
  const DensityMatrix rho{load_matrix(opt.input)};
  rho.validate();
  TwirlPlan plan;
  plan.reg = reg;
  plan.branches = opt.branches;
  plan.iterations = opt.iterations;
  plan.source = parse_source(opt.source, reg.local_dim);
  plan.variant = opt.variant == "isotropic" ? TwirlVariant::Isotropic
                                            : TwirlVariant::Werner;
  RngHandle rng(opt.seed);
  const DensityMatrix out = recursive_twirl(rho, plan, rng);
  if (!opt.output.empty()) save_matrix(out.matrix, out_path(opt.output));
  std::cout << resolved_params({{"verb", "twirl run"},
                                {"input", opt.input},
                                {"out", opt.output},
                                {"n", opt.n},
                                {"d", opt.d},
                                {"iterations", opt.iterations},
                                {"branches", opt.branches},
                                {"source", source_to_string(plan.source)},
                                {"variant", opt.variant},
                                {"seed", opt.seed}})
                   .dump()
            << '\n';
  return 0;
}

std::vector<ComplexMatrix> load_matrix_or_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("invalid JSON in " + path + ": " + e.what());
  }
  if (j.is_array()) {
    std::vector<ComplexMatrix> out;
    for (const json& item : j) out.push_back(matrix_from_json(item));
    return out;
  }
  return {matrix_from_json(j)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recursive twirling of multi-qudit states and superoperators"};
  app.require_subcommand(1);
  app.failure_message([](const CLI::App*, const CLI::Error& e) {
    emit_error("flags", e.what(), kExitFlags);
    return std::string{};
  });

  int threads = env_threads();
  app.add_option("--threads", threads, "Worker pool size (0 = machine)");

  // twirl exact|run
  auto* twirl_cmd = app.add_subcommand("twirl", "State-level twirling");
  twirl_cmd->require_subcommand(1);

  auto* exact_cmd = twirl_cmd->add_subcommand("exact", "Exact Werner projection");
  std::string ex_input, ex_output, ex_variant = "werner";
  int ex_n = 2;
  Eigen::Index ex_d = 2;
  exact_cmd->add_option("--input", ex_input)->required();
  exact_cmd->add_option("--out", ex_output)->required();
  exact_cmd->add_option("--n", ex_n)->required();
  exact_cmd->add_option("--d", ex_d)->required();
  exact_cmd->add_option("--variant", ex_variant)
      ->check(CLI::IsMember({"werner", "isotropic"}));

  auto* run_cmd = twirl_cmd->add_subcommand("run", "Recursive twirl Q_{K,M}");
  TwirlRunOptions run_opt;
  run_cmd->add_option("--input", run_opt.input)->required();
  run_cmd->add_option("--out", run_opt.output);
  run_cmd->add_option("--n", run_opt.n)->required();
  run_cmd->add_option("--d", run_opt.d)->required();
  run_cmd->add_option("--iterations", run_opt.iterations)->required();
  run_cmd->add_option("--branches", run_opt.branches);
  run_cmd->add_option("--source", run_opt.source);
  run_cmd->add_option("--seed", run_opt.seed);
  run_cmd->add_option("--variant", run_opt.variant)
      ->check(CLI::IsMember({"werner", "isotropic"}));

  // superop build|error
  auto* superop_cmd = app.add_subcommand("superop", "Superoperator tools");
  superop_cmd->require_subcommand(1);

  auto* build_cmd = superop_cmd->add_subcommand("build", "Build a superoperator");
  std::string b_kind = "exact", b_source = "haar", b_output;
  int b_n = 2, b_iterations = 0, b_branches = 2;
  Eigen::Index b_d = 2;
  std::uint64_t b_seed = 0;
  build_cmd->add_option("--kind", b_kind)
      ->check(CLI::IsMember({"exact", "recursive", "average"}));
  build_cmd->add_option("--n", b_n)->required();
  build_cmd->add_option("--d", b_d)->required();
  build_cmd->add_option("--iterations", b_iterations);
  build_cmd->add_option("--branches", b_branches);
  build_cmd->add_option("--source", b_source);
  build_cmd->add_option("--seed", b_seed);
  build_cmd->add_option("--out", b_output)->required();

  auto* err_cmd = superop_cmd->add_subcommand("error", "HS distance squared");
  std::string e_a, e_b;
  err_cmd->add_option("--a", e_a)->required();
  err_cmd->add_option("--b", e_b)->required();

  // integrate
  auto* int_cmd = app.add_subcommand("integrate", "Trace integrals over U(d)");
  int i_m = 1, i_n = 1, i_iters = 200, i_runs = 1;
  Eigen::Index i_dim = 2;
  std::uint64_t i_seed = 0;
  std::string i_a, i_b, i_out;
  bool i_su = false;
  int_cmd->add_option("--m", i_m);
  int_cmd->add_option("--n", i_n);
  int_cmd->add_option("--dim", i_dim)->required();
  int_cmd->add_option("--iters", i_iters);
  int_cmd->add_option("--runs", i_runs, "Average over independent seeded runs");
  int_cmd->add_option("--a", i_a);
  int_cmd->add_option("--b", i_b);
  int_cmd->add_option("--seed", i_seed);
  int_cmd->add_option("--out", i_out)->required();
  int_cmd->add_flag("--su", i_su,
                    "Experimental: integrate over SU(d) instead of U(d)");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Figure-reproduction presets");
  std::string fig_name, bench_out;
  std::uint64_t bench_seed = 0;
  bench_cmd->add_option("figure", fig_name)->required();
  bench_cmd->add_option("--seed", bench_seed);
  bench_cmd->add_option("--out", bench_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitFlags;
  }

  try {
    if (*exact_cmd) {
      return run_twirl_exact(ex_input, ex_output, ex_n, ex_d, ex_variant);
    }
    if (*run_cmd) return run_twirl_run(run_opt);

    if (*build_cmd) {
      const QuditRegister reg{b_n, b_d};
      RngHandle rng(b_seed);
      Superoperator s;
      if (b_kind == "exact") {
        s = exact_twirl_superop(reg, build_permutation_basis(reg));
      } else if (b_kind == "average") {
        s = avg_twirl_superop(b_iterations, parse_source(b_source, b_d), reg,
                              rng);
      } else {
        TwirlPlan plan;
        plan.reg = reg;
        plan.branches = b_branches;
        plan.iterations = b_iterations;
        plan.source = parse_source(b_source, b_d);
        s = recursive_twirl_superop(plan, rng);
      }
      save_superop(s, out_path(b_output));
      std::cout << resolved_params({{"verb", "superop build"},
                                    {"kind", b_kind},
                                    {"n", b_n},
                                    {"d", b_d},
                                    {"iterations", b_iterations},
                                    {"branches", b_branches},
                                    {"source", b_source},
                                    {"seed", b_seed},
                                    {"out", b_output}})
                       .dump()
                << '\n';
      return 0;
    }

    if (*err_cmd) {
      const Superoperator a = load_superop(e_a);
      const Superoperator b = load_superop(e_b);
      std::cout << format_double(superop_error(a, b)) << '\n';
      return 0;
    }

    if (*int_cmd) {
      RngHandle rng(i_seed);
      const UnitaryGroup group =
          i_su ? UnitaryGroup::Special : UnitaryGroup::Full;
      const MomentOperator mop =
          moment_operator_averaged(i_m, i_n, i_dim, i_iters, i_runs, rng, group);
      json result = resolved_params({{"verb", "integrate"},
                                     {"m", i_m},
                                     {"n", i_n},
                                     {"dim", i_dim},
                                     {"iters", i_iters},
                                     {"runs", i_runs},
                                     {"seed", i_seed},
                                     {"group", i_su ? "su" : "u"}});
      result["convergence"] = mop.step_deltas;
      if (!i_a.empty() || !i_b.empty()) {
        const auto a_list =
            i_a.empty() ? std::vector<ComplexMatrix>{} : load_matrix_or_list(i_a);
        const auto b_list =
            i_b.empty() ? std::vector<ComplexMatrix>{} : load_matrix_or_list(i_b);
        const Complex value = trace_integral(a_list, b_list, mop);
        result["integral"] = {value.real(), value.imag()};
      }
      std::ofstream out(out_path(i_out));
      if (!out) throw std::runtime_error("cannot write file: " + i_out);
      out << result.dump(2) << '\n';
      std::cout << result.dump() << '\n';
      return 0;
    }

    if (*bench_cmd) {
      const FigureId id = parse_figure_id(fig_name);
      std::string prefix = out_path(bench_out);
      if (prefix.size() > 4 && prefix.ends_with(".csv")) {
        prefix.resize(prefix.size() - 4);
      }
      const ErrorCurve curve = reproduce(id, bench_seed, prefix, threads);
      std::cout << resolved_params({{"verb", "bench"},
                                    {"figure", fig_name},
                                    {"seed", bench_seed},
                                    {"out", prefix + ".csv"},
                                    {"records", curve.records.size()}})
                       .dump()
                << '\n';
      return 0;
    }
  } catch (const ParseError& e) {
    emit_error("parse", e.what(), kExitParse);
    return kExitParse;
  } catch (const GuardError& e) {
    emit_error("guard", e.what(), kExitGuard);
    return kExitGuard;
  } catch (const std::invalid_argument& e) {
    emit_error("validation", e.what(), kExitValidation);
    return kExitValidation;
  } catch (const std::exception& e) {
    emit_error("internal", e.what(), 1);
    return 1;
  }
  return 0;
}
