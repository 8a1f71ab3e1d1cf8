/*
 * Copyright 2026 the hyflexa authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hyflexa/driver.hpp"
#include "hyflexa/generator.hpp"
#include "hyflexa/io.hpp"
#include "hyflexa/lasso.hpp"
#include "hyflexa/oracle.hpp"

namespace hyflexa::cli {

// Exit codes: 0 success, 1 usage error, 2 nonconvergence, 3 numeric error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNoConvergence = 2;
inline constexpr int kExitNumeric = 3;

namespace detail {

/// Solver settings as given on the command line, before the block count is
/// known. The dotted config keys accepted by --set map onto these fields.
struct RawSolverOpts {
  std::string sampling = "nice";
  int tau = 0;  // 0 = half the blocks
  double expected_size = 0.0;
  int partition_count = 0;
  std::string du_pmf;

  std::string greedy = "threshold";
  double sigma = 0.1;
  double rho = 1.0;

  std::string step = "diminishing";
  double gamma0 = 1.0;
  double theta = 1e-2;
  double constant_step = 0.1;

  std::string error_bound = "exact";
  double s_lower = 1.0;
  double s_upper = 1.0;

  double alpha1 = 0.0;
  double alpha2 = 1e3;
  int max_iters = 200000;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  int workers = 0;  // 0 = HYFLEXA_WORKERS or 1
  int full_every = 0;
  int inner_max_iters = 10000;

  double prox_tau = 0.0;  // 0 = per-column default rule
};

inline int env_default_workers() {
  if (const char* env = std::getenv("HYFLEXA_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return w;
  }
  return 1;
}

/// Applies one dotted-key override (the documented config keys) or its bare
/// alias to the raw options.
inline void apply_config_key(RawSolverOpts& o, const std::string& key, const std::string& value) {
  const auto as_double = [&] { return std::stod(value); };
  const auto as_int = [&] { return std::stoi(value); };
  const auto as_u64 = [&] { return static_cast<std::uint64_t>(std::stoull(value)); };

  if (key == "sampling.rule" || key == "sampling") o.sampling = value;
  else if (key == "sampling.tau" || key == "tau") o.tau = as_int();
  else if (key == "sampling.expected_size" || key == "expected-size") o.expected_size = as_double();
  else if (key == "sampling.partition_count" || key == "partition-count") o.partition_count = as_int();
  else if (key == "sampling.du_pmf" || key == "du-pmf") o.du_pmf = value;
  else if (key == "greedy.mode" || key == "greedy") o.greedy = value;
  else if (key == "greedy.sigma" || key == "sigma") o.sigma = as_double();
  else if (key == "greedy.rho" || key == "rho") o.rho = as_double();
  else if (key == "step.kind" || key == "step") o.step = value;
  else if (key == "step.gamma0" || key == "gamma0") o.gamma0 = as_double();
  else if (key == "step.theta" || key == "theta") o.theta = as_double();
  else if (key == "step.constant" || key == "constant") o.constant_step = as_double();
  else if (key == "run.max_iters" || key == "max-iters") o.max_iters = as_int();
  else if (key == "run.tol" || key == "tol") o.tol = as_double();
  else if (key == "run.workers" || key == "workers") o.workers = as_int();
  else if (key == "diag.full_every" || key == "full-every") o.full_every = as_int();
  else if (key == "inexact.alpha1" || key == "alpha1") o.alpha1 = as_double();
  else if (key == "inexact.alpha2" || key == "alpha2") o.alpha2 = as_double();
  else if (key == "inner.max_iters" || key == "inner-max-iters") o.inner_max_iters = as_int();
  else if (key == "seed") o.seed = as_u64();
  else if (key == "surrogate.tau" || key == "prox-tau") o.prox_tau = as_double();
  else if (key == "surrogate.kind") {
    if (value != "block-exact")
      throw config_error("surrogate.kind: lasso instances support only 'block-exact'");
  } else if (key == "error_bound.kind" || key == "error-bound") o.error_bound = value;
  else if (key == "error_bound.s_lower" || key == "s-lower") o.s_lower = as_double();
  else if (key == "error_bound.s_upper" || key == "s-upper") o.s_upper = as_double();
  else throw config_error("unknown config key: " + key);
}

inline SamplingRule make_sampling(const RawSolverOpts& o, int n_blocks) {
  if (o.sampling == "nice") {
    const int tau = o.tau > 0 ? o.tau : std::max(1, n_blocks / 2);
    return SamplingRule::nice(n_blocks, tau);
  }
  if (o.sampling == "uniform") {
    const double e = o.expected_size > 0.0 ? o.expected_size : std::max(1.0, n_blocks / 2.0);
    return SamplingRule::uniform(n_blocks, e);
  }
  if (o.sampling == "du" || o.sampling == "doubly-uniform") {
    if (o.du_pmf.empty())
      throw config_error("doubly-uniform sampling needs --du-pmf (comma-separated, N entries)");
    std::vector<double> pmf;
    std::stringstream ss(o.du_pmf);
    std::string tok;
    while (std::getline(ss, tok, ',')) pmf.push_back(std::stod(tok));
    return SamplingRule::doubly_uniform(n_blocks, std::move(pmf));
  }
  if (o.sampling == "nu" || o.sampling == "nonoverlapping") {
    const int parts = o.partition_count > 0 ? o.partition_count : 2;
    return SamplingRule::nonoverlapping_contiguous(n_blocks, parts);
  }
  if (o.sampling == "sequential") return SamplingRule::sequential(n_blocks);
  if (o.sampling == "full" || o.sampling == "fully-parallel")
    return SamplingRule::fully_parallel(n_blocks);
  throw config_error("unknown sampling rule: " + o.sampling);
}

inline SolverConfig make_config(const RawSolverOpts& o, int n_blocks) {
  SolverConfig cfg;
  cfg.sampling = make_sampling(o, n_blocks);
  if (o.greedy == "threshold") cfg.greedy = GreedyPolicy::threshold(o.sigma);
  else if (o.greedy == "minrho" || o.greedy == "minimal-rho")
    cfg.greedy = GreedyPolicy::minimal_rho(o.rho);
  else throw config_error("unknown greedy mode: " + o.greedy);

  if (o.step == "diminishing") cfg.schedule = StepSizeSchedule::diminishing(o.gamma0, o.theta);
  else if (o.step == "constant") cfg.schedule = StepSizeSchedule::constant_step(o.constant_step);
  else throw config_error("unknown step kind: " + o.step);

  if (o.error_bound == "exact") cfg.error_bound = ErrorBoundSpec::exact_distance();
  else if (o.error_bound == "scaled") {
    cfg.error_bound = ErrorBoundSpec::scaled(
        std::vector<double>(static_cast<std::size_t>(n_blocks), o.s_lower),
        std::vector<double>(static_cast<std::size_t>(n_blocks), o.s_upper));
  } else throw config_error("unknown error bound kind: " + o.error_bound);

  cfg.alpha1 = o.alpha1;
  cfg.alpha2 = o.alpha2;
  cfg.max_iters = o.max_iters;
  cfg.residual_tol = o.tol;
  cfg.seed = o.seed;
  cfg.workers = o.workers > 0 ? o.workers : env_default_workers();
  cfg.full_residual_every = o.full_every;
  cfg.inner_max_iters = o.inner_max_iters;
  cfg.record_trace = true;
  return cfg;
}

inline std::vector<double> make_tau(const RawSolverOpts& o, const LassoProblem& p) {
  if (o.prox_tau > 0.0) return std::vector<double>(static_cast<std::size_t>(p.n()), o.prox_tau);
  return default_lasso_tau(p);
}

inline void add_solver_flags(CLI::App* cmd, RawSolverOpts& o,
                             std::vector<std::string>& overrides) {
  cmd->add_option("--sampling", o.sampling,
                  "sampling rule: uniform|du|nu|nice|sequential|full");
  cmd->add_option("--tau", o.tau, "nice sampling cardinality (0 = N/2)");
  cmd->add_option("--expected-size", o.expected_size, "uniform sampling expected |S|");
  cmd->add_option("--partition-count", o.partition_count, "nonoverlapping sampling parts");
  cmd->add_option("--du-pmf", o.du_pmf, "doubly-uniform cardinality pmf, comma separated");
  cmd->add_option("--greedy", o.greedy, "greedy mode: threshold|minrho");
  cmd->add_option("--sigma", o.sigma, "threshold fraction of the max error bound");
  cmd->add_option("--rho", o.rho, "minimal-rho parameter");
  cmd->add_option("--step", o.step, "step size: diminishing|constant");
  cmd->add_option("--gamma0", o.gamma0, "initial step size");
  cmd->add_option("--theta", o.theta, "diminishing decay constant");
  cmd->add_option("--constant", o.constant_step, "constant step size");
  cmd->add_option("--error-bound", o.error_bound, "error bound: exact|scaled");
  cmd->add_option("--s-lower", o.s_lower, "scaled bound lower factor");
  cmd->add_option("--s-upper", o.s_upper, "scaled bound upper factor");
  cmd->add_option("--alpha1", o.alpha1, "inexactness budget factor (0 = exact solves)");
  cmd->add_option("--alpha2", o.alpha2, "inexactness budget cap");
  cmd->add_option("--max-iters", o.max_iters, "iteration cap");
  cmd->add_option("--tol", o.tol, "sampled-residual termination tolerance");
  cmd->add_option("--workers", o.workers, "worker threads (default $HYFLEXA_WORKERS or 1)");
  cmd->add_option("--full-every", o.full_every, "full-residual diagnostic period (0 = off)");
  cmd->add_option("--inner-max-iters", o.inner_max_iters, "inner solver iteration cap");
  cmd->add_option("--prox-tau", o.prox_tau, "uniform proximal weight (0 = per-column rule)");
  cmd->add_option("--set", overrides, "dotted config key override, key=value (repeatable)")
      ->expected(-1);
}

inline void apply_overrides(RawSolverOpts& o, const std::vector<std::string>& overrides) {
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw config_error("--set expects key=value, got: " + kv);
    apply_config_key(o, kv.substr(0, eq), kv.substr(eq + 1));
  }
}

// ---------------------------------------------------------------------------
// Instance files
// ---------------------------------------------------------------------------

struct InstancePaths {
  std::string matrix, rhs, xstar, meta;
  static InstancePaths in_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    InstancePaths p;
    p.matrix = (fs::path(dir) / "A.mtx").string();
    p.rhs = (fs::path(dir) / "b.txt").string();
    p.xstar = (fs::path(dir) / "xstar.txt").string();
    p.meta = (fs::path(dir) / "meta.txt").string();
    return p;
  }
};

inline void write_instance(const std::string& dir, const LassoProblem& p, std::uint64_t seed,
                           double s_a, double s_sol) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const auto paths = InstancePaths::in_dir(dir);
  io::write_matrix_market(paths.matrix, p.A);
  io::write_vector(paths.rhs, p.b);
  std::vector<std::pair<std::string, std::string>> meta;
  meta.emplace_back("c", io::format_double(p.c));
  if (p.known_optimum) {
    io::write_vector(paths.xstar, p.known_optimum->x_star);
    meta.emplace_back("v_star", io::format_double(p.known_optimum->v_star));
  }
  meta.emplace_back("seed", std::to_string(seed));
  meta.emplace_back("s_a", io::format_double(s_a));
  meta.emplace_back("s_sol", io::format_double(s_sol));
  io::write_metadata(paths.meta, meta);
}

inline LassoProblem load_instance(const std::string& dir) {
  namespace fs = std::filesystem;
  const auto paths = InstancePaths::in_dir(dir);
  SpMat a = io::read_matrix_market(paths.matrix);
  Vec b = io::read_vector(paths.rhs);
  const auto meta = io::read_metadata(paths.meta);
  const double c = std::stod(meta.at("c"));
  LassoProblem p(std::move(a), std::move(b), c);
  if (fs::exists(paths.xstar) && meta.count("v_star")) {
    LassoProblem::KnownOptimum opt;
    opt.x_star = io::read_vector(paths.xstar);
    opt.v_star = std::stod(meta.at("v_star"));
    p.known_optimum = std::move(opt);
  }
  return p;
}

/// Ad-hoc instance from explicit matrix / rhs paths; .mtx loads as sparse
/// coordinate text, anything else as whitespace-delimited dense rows.
inline LassoProblem load_adhoc(const std::string& matrix_path, const std::string& rhs_path,
                               double c) {
  SpMat a;
  if (matrix_path.size() >= 4 && matrix_path.substr(matrix_path.size() - 4) == ".mtx") {
    a = io::read_matrix_market(matrix_path);
  } else {
    const Eigen::MatrixXd dense = io::read_dense_matrix(matrix_path);
    a = dense.sparseView();
    a.makeCompressed();
  }
  Vec b = io::read_vector(rhs_path);
  return LassoProblem(std::move(a), std::move(b), c);
}

// ---------------------------------------------------------------------------
// Trace CSV
// ---------------------------------------------------------------------------

inline constexpr const char* kTraceHeader =
    "k,objective,rel_error,residual,gamma,sampled,updated,elapsed_s";

inline void write_trace_csv(const std::string& path, const std::vector<IterationTrace>& trace,
                            std::optional<double> v_star) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << kTraceHeader << '\n';
  for (const auto& row : trace) {
    const double re = v_star ? (row.objective - *v_star) / *v_star
                             : std::numeric_limits<double>::quiet_NaN();
    out << row.k << ',' << io::format_double(row.objective) << ',' << io::format_double(re)
        << ',' << io::format_double(row.residual) << ',' << io::format_double(row.gamma) << ','
        << row.sampled << ',' << row.updated << ',' << io::format_double(row.elapsed_s)
        << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

inline int cmd_generate(int m, int n, double s_a, double s_sol, std::uint64_t seed, double c,
                        const std::string& out_dir, std::ostream& out) {
  const LassoProblem p = generate_nesterov(m, n, s_a, s_sol, seed, c);
  detail::write_instance(out_dir, p, seed, s_a, s_sol);
  out << "wrote instance to " << out_dir << " (m=" << m << " n=" << n
      << " nnz=" << p.A.nonZeros() << " v_star=" << io::format_double(p.known_optimum->v_star)
      << ")\n";
  return kExitOk;
}

inline int cmd_solve(const LassoProblem& problem, const detail::RawSolverOpts& raw,
                     const std::string& out_csv, std::ostream& out, double setup_seconds) {
  const SolverConfig cfg = detail::make_config(raw, problem.n());
  LassoBackend backend(problem, detail::make_tau(raw, problem));

  const std::optional<double> v_star =
      problem.known_optimum ? std::optional<double>(problem.known_optimum->v_star)
                            : std::nullopt;
  const Vec x0 = Vec::Zero(problem.n());

  SolveResult result;
  try {
    result = run(backend, cfg, x0);
  } catch (const solver_error& e) {
    if (!out_csv.empty()) detail::write_trace_csv(out_csv, e.partial_trace, v_star);
    throw;
  }

  if (!out_csv.empty()) detail::write_trace_csv(out_csv, result.trace, v_star);
  out << "setup_s=" << io::format_double(setup_seconds) << '\n';
  if (v_star) {
    out << "final_re=" << io::format_double((result.final_objective - *v_star) / *v_star)
        << '\n';
  } else {
    out << "final_objective=" << io::format_double(result.final_objective) << '\n';
  }
  out << (result.converged ? "converged" : "not converged") << " after " << result.iterations
      << " iterations\n";
  return result.converged ? kExitOk : kExitNoConvergence;
}

struct BenchVariant {
  std::string label;
  std::vector<std::string> overrides;  // key=value
};

inline int cmd_bench(int m, int n, double s_a, double s_sol, std::uint64_t seed, double c,
                     int repetitions, const detail::RawSolverOpts& base,
                     const std::vector<BenchVariant>& variants, const std::string& out_csv,
                     std::ostream& out) {
  if (repetitions < 1) throw config_error("bench: repetitions must be >= 1");

  std::ofstream csv(out_csv);
  if (!csv) throw std::runtime_error("cannot open for writing: " + out_csv);
  csv << "label,k,mean_rel_error,mean_elapsed_s,reps_ok,status\n";

  for (const auto& variant : variants) {
    detail::RawSolverOpts raw = base;
    for (const auto& kv : variant.overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw config_error("variant override expects key=value, got: " + kv);
      detail::apply_config_key(raw, kv.substr(0, eq), kv.substr(eq + 1));
    }

    std::vector<std::vector<double>> re_rows;   // per rep, per k
    std::vector<std::vector<double>> el_rows;
    int failed = 0;
    for (int rep = 0; rep < repetitions; ++rep) {
      const std::uint64_t rep_seed = seed + static_cast<std::uint64_t>(rep);
      const LassoProblem p = generate_nesterov(m, n, s_a, s_sol, rep_seed, c);
      detail::RawSolverOpts rep_raw = raw;
      rep_raw.seed = rep_seed;
      const SolverConfig cfg = detail::make_config(rep_raw, p.n());
      LassoBackend backend(p, detail::make_tau(rep_raw, p));
      try {
        const SolveResult res = run(backend, cfg, Vec::Zero(p.n()));
        std::vector<double> re_row, el_row;
        re_row.reserve(res.trace.size());
        el_row.reserve(res.trace.size());
        const double v_star = p.known_optimum->v_star;
        for (const auto& row : res.trace) {
          re_row.push_back((row.objective - v_star) / v_star);
          el_row.push_back(row.elapsed_s);
        }
        re_rows.push_back(std::move(re_row));
        el_rows.push_back(std::move(el_row));
      } catch (const solver_error& e) {
        ++failed;
        out << "rep " << rep << " (" << variant.label << ") failed: " << e.what() << '\n';
      }
    }

    std::size_t max_k = 0;
    for (const auto& r : re_rows) max_k = std::max(max_k, r.size());
    const std::string status =
        failed == 0 ? "ok"
                    : "partial(" + std::to_string(failed) + "/" + std::to_string(repetitions) + ")";
    for (std::size_t k = 0; k < max_k; ++k) {
      double re_sum = 0.0, el_sum = 0.0;
      int count = 0;
      for (std::size_t rep = 0; rep < re_rows.size(); ++rep) {
        if (k < re_rows[rep].size()) {
          re_sum += re_rows[rep][k];
          el_sum += el_rows[rep][k];
          ++count;
        }
      }
      if (count == 0) continue;
      csv << variant.label << ',' << k << ',' << io::format_double(re_sum / count) << ','
          << io::format_double(el_sum / count) << ',' << re_rows.size() << ',' << status
          << '\n';
    }
  }
  if (!csv) throw std::runtime_error("write failed: " + out_csv);
  out << "wrote " << out_csv << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"hybrid random/greedy parallel block-coordinate solver"};
  app.require_subcommand(1);

  // generate
  int g_m = 0, g_n = 0;
  double g_sa = 30.0, g_ssol = 1.0, g_c = 1.0;
  std::uint64_t g_seed = 1;
  std::string g_out;
  auto* gen = app.add_subcommand("generate", "generate a synthetic instance with certified optimum");
  gen->add_option("--m", g_m, "rows")->required();
  gen->add_option("--n", g_n, "columns")->required();
  gen->add_option("--s-a", g_sa, "average % of nonzeros per column");
  gen->add_option("--s-sol", g_ssol, "% of nonzeros in the designated solution");
  gen->add_option("--seed", g_seed, "generator seed");
  gen->add_option("--c", g_c, "l1 weight");
  gen->add_option("--out", g_out, "output directory")->required();

  // solve
  detail::RawSolverOpts s_raw;
  std::vector<std::string> s_overrides;
  std::string s_instance, s_matrix, s_rhs, s_out;
  double s_c = 1.0;
  auto* solve = app.add_subcommand("solve", "solve an instance and write the iteration trace");
  solve->add_option("--instance", s_instance, "instance directory from 'generate'");
  solve->add_option("--matrix", s_matrix, "ad-hoc matrix path (.mtx or dense text)");
  solve->add_option("--rhs", s_rhs, "ad-hoc right-hand side (one value per line)");
  solve->add_option("--c", s_c, "l1 weight for ad-hoc instances");
  solve->add_option("--out", s_out, "trace CSV path");
  solve->add_option("--seed", s_raw.seed, "solver RNG seed");
  detail::add_solver_flags(solve, s_raw, s_overrides);

  // bench
  detail::RawSolverOpts b_raw;
  std::vector<std::string> b_overrides;
  int b_m = 0, b_n = 0, b_reps = 1;
  double b_sa = 30.0, b_ssol = 1.0, b_c = 1.0;
  std::uint64_t b_seed = 1;
  std::string b_out;
  std::vector<std::string> b_variants;
  auto* bench = app.add_subcommand("bench", "aggregate repeated runs over derived seeds");
  bench->add_option("--m", b_m, "rows")->required();
  bench->add_option("--n", b_n, "columns")->required();
  bench->add_option("--s-a", b_sa, "average % of nonzeros per column");
  bench->add_option("--s-sol", b_ssol, "% of nonzeros in the designated solution");
  bench->add_option("--seed", b_seed, "base seed; rep r uses seed+r");
  bench->add_option("--c", b_c, "l1 weight");
  bench->add_option("--reps", b_reps, "repetitions");
  bench->add_option("--out", b_out, "aggregate CSV path")->required();
  bench->add_option("--variant", b_variants,
                    "labeled config override, label:key=value[,key=value...] (repeatable)")
      ->expected(-1);
  detail::add_solver_flags(bench, b_raw, b_overrides);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("hyflexa");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::stringstream msg_out, msg_err;
    const int code = app.exit(e, msg_out, msg_err);
    out << msg_out.str();
    err << msg_err.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      return cmd_generate(g_m, g_n, g_sa, g_ssol, g_seed, g_c, g_out, out);
    }
    if (solve->parsed()) {
      const auto t0 = std::chrono::steady_clock::now();
      detail::apply_overrides(s_raw, s_overrides);
      LassoProblem problem;
      if (!s_instance.empty()) {
        problem = detail::load_instance(s_instance);
      } else if (!s_matrix.empty() && !s_rhs.empty()) {
        problem = detail::load_adhoc(s_matrix, s_rhs, s_c);
      } else {
        err << "solve: need --instance or --matrix/--rhs\n";
        return kExitUsage;
      }
      const double setup_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return cmd_solve(problem, s_raw, s_out, out, setup_s);
    }
    if (bench->parsed()) {
      detail::apply_overrides(b_raw, b_overrides);
      std::vector<BenchVariant> variants;
      for (const auto& spec : b_variants) {
        const auto colon = spec.find(':');
        BenchVariant v;
        v.label = colon == std::string::npos ? spec : spec.substr(0, colon);
        if (colon != std::string::npos) {
          std::stringstream ss(spec.substr(colon + 1));
          std::string tok;
          while (std::getline(ss, tok, ',')) v.overrides.push_back(tok);
        }
        variants.push_back(std::move(v));
      }
      if (variants.empty()) variants.push_back(BenchVariant{"default", {}});
      return cmd_bench(b_m, b_n, b_sa, b_ssol, b_seed, b_c, b_reps, b_raw, variants, b_out, out);
    }
  } catch (const config_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const solver_error& e) {
    err << "solver error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const numeric_error& e) {
    err << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace hyflexa::cli
