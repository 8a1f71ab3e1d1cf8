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

#include <algorithm>
#include <chrono>
#include <limits>
#include <optional>
#include <vector>

#include "hyflexa/blocksolve.hpp"
#include "hyflexa/parallel.hpp"
#include "hyflexa/rng.hpp"
#include "hyflexa/sampling.hpp"
#include "hyflexa/schedule.hpp"

namespace hyflexa {

struct SolverConfig {
  SamplingRule sampling;
  GreedyPolicy greedy;
  StepSizeSchedule schedule;
  ErrorBoundSpec error_bound;

  // Inexactness budget constants; alpha1 == 0 forces exact solves.
  double alpha1 = 0.0;
  double alpha2 = 1e3;

  int max_iters = 1000;
  double residual_tol = 0.0;
  std::uint64_t seed = 0;
  int workers = 1;
  bool record_trace = true;

  /// Every how many iterations the full residual ||xhat(x^k) - x^k|| over all
  /// blocks is evaluated for diagnostics; 0 disables it.
  int full_residual_every = 0;

  /// Check the per-iteration block-optimality descent inequality (exact
  /// solves only); violations are tracked in the result.
  bool check_descent = false;

  int inner_max_iters = 10000;

  void validate(int n_blocks) const {
    if (max_iters < 1) throw config_error("solver config: max_iters must be >= 1");
    if (residual_tol < 0.0) throw config_error("solver config: residual_tol must be >= 0");
    if (workers < 1) throw config_error("solver config: workers must be >= 1");
    if (alpha1 < 0.0 || alpha2 < 0.0)
      throw config_error("solver config: inexactness constants must be nonnegative");
    if (sampling.n_blocks != n_blocks)
      throw config_error("solver config: sampling rule block count does not match problem");
    sampling.validate();
    schedule.validate();
  }
};

/// One row of diagnostics per iteration k. `objective` and `residual` are
/// evaluated at the iterate entering the iteration (x^k), `gamma` is the step
/// applied by it.
struct IterationTrace {
  int k = 0;
  double objective = 0.0;
  double residual = 0.0;
  std::optional<double> full_residual;
  double gamma = 0.0;
  int sampled = 0;
  int updated = 0;
  double elapsed_s = 0.0;
  std::optional<double> descent_violation;
};

struct SolveResult {
  Vec final_x;
  double final_objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<IterationTrace> trace;

  // Diagnostics aggregated over the run.
  double min_full_residual = std::numeric_limits<double>::infinity();
  double max_descent_violation = -std::numeric_limits<double>::infinity();
  std::optional<double> final_full_residual;  // set when convergence was confirmed
};

struct SolverState {
  Vec x;
  double gamma = 1.0;
  int k = 0;
};

/// Carries the iteration index and the partial trace of a failed run.
class solver_error : public std::runtime_error {
 public:
  solver_error(const std::string& msg, int iteration, std::vector<IterationTrace> partial)
      : std::runtime_error(msg), iteration(iteration), partial_trace(std::move(partial)) {}
  int iteration;
  std::vector<IterationTrace> partial_trace;
};

namespace detail {

struct DescentAccumulator {
  double grad_dot = 0.0;
  double dist_sq = 0.0;
  double g_diff = 0.0;
  double q = std::numeric_limits<double>::infinity();
};

}  // namespace detail

/// One iteration: sample a block set, measure per-block optimality, keep the
/// promising blocks, solve them in parallel and take the damped step
/// x <- x + gamma * (zhat - x) on the kept blocks only. Blocks outside the
/// kept set are untouched bit for bit.
///
/// The backend supplies the problem-specific pieces; see LassoBackend and
/// GenericBackend. All block solves read the shared iterate immutably and
/// write only their own slot, so results do not depend on the worker count.
template <class Backend>
IterationTrace iterate(SolverState& state, Backend& backend, const SolverConfig& cfg,
                       SplitMix64& rng, WorkerPool& pool) {
  using Slot = typename Backend::Slot;

  backend.begin_iteration(state.x);

  const std::vector<int> sampled = draw(cfg.sampling, rng);
  const int ns = static_cast<int>(sampled.size());
  std::vector<Slot> slots(static_cast<std::size_t>(ns));
  std::vector<double> bound(static_cast<std::size_t>(ns));
  const bool exact_mode = cfg.alpha1 == 0.0;

  pool.for_range(ns, [&](int idx) {
    const int i = sampled[static_cast<std::size_t>(idx)];
    double eps = 0.0;
    if (!exact_mode) {
      eps = inexactness_budget(state.gamma, backend.block_grad_norm(i, state.x), cfg.alpha1,
                               cfg.alpha2);
    }
    slots[static_cast<std::size_t>(idx)] = backend.solve_block_sampled(i, state.x, eps);
    bound[static_cast<std::size_t>(idx)] =
        error_bound(cfg.error_bound, i, slots[static_cast<std::size_t>(idx)].dist);
  });

  double residual = 0.0;
  for (int idx = 0; idx < ns; ++idx) residual = std::max(residual, bound[static_cast<std::size_t>(idx)]);

  const auto position_of = [&sampled](int block) {
    return static_cast<std::size_t>(
        std::lower_bound(sampled.begin(), sampled.end(), block) - sampled.begin());
  };
  const std::vector<int> kept = greedy_subselect(
      sampled, [&](int block) { return bound[position_of(block)]; }, cfg.greedy);

  IterationTrace row;
  row.k = state.k;
  row.objective = backend.objective(state.x);
  row.residual = residual;
  row.gamma = state.gamma;
  row.sampled = ns;
  row.updated = static_cast<int>(kept.size());

  if (cfg.full_residual_every > 0 && state.k % cfg.full_residual_every == 0) {
    row.full_residual = backend.full_residual(state.x, pool);
  }

  if (cfg.check_descent && exact_mode) {
    detail::DescentAccumulator acc;
    for (int block : kept) {
      const Slot& slot = slots[position_of(block)];
      backend.accumulate_descent(block, state.x, slot, acc.grad_dot, acc.dist_sq, acc.g_diff,
                                 acc.q);
    }
    // grad F(x)^T (xhat - x) restricted to the kept blocks must not exceed
    // -q ||xhat - x||^2 plus the G decrease collected over those blocks.
    row.descent_violation = acc.grad_dot - (-acc.q * acc.dist_sq + acc.g_diff);
  }

  backend.apply_update(state.x, sampled, slots, kept, state.gamma);

  state.gamma = cfg.schedule.next(state.gamma);
  state.k += 1;
  return row;
}

/// Full solver loop. For identical (problem, config, x0, seed) the result is
/// bit-identical regardless of the worker count.
template <class Backend>
SolveResult run(Backend& backend, const SolverConfig& cfg, const Vec& x0) {
  cfg.validate(backend.n_blocks());
  backend.check_start(x0);

  SolverState state;
  state.x = x0;
  state.gamma = cfg.schedule.initial();
  state.k = 0;
  backend.reset(state.x);

  SplitMix64 rng(cfg.seed);
  WorkerPool pool(cfg.workers);

  SolveResult result;
  const auto t0 = std::chrono::steady_clock::now();
  bool converged = false;

  // The sampled residual can hit zero spuriously when every drawn block
  // happens to sit at its own best response (common with soft-thresholded
  // exact zeros), so it only *triggers* termination; convergence is declared
  // after the full residual over all blocks confirms it. Failed
  // confirmations are throttled to one per kConfirmCooldown iterations.
  constexpr int kConfirmCooldown = 100;
  long long last_confirm = -static_cast<long long>(kConfirmCooldown);

  while (state.k < cfg.max_iters) {
    IterationTrace row;
    try {
      row = iterate(state, backend, cfg, rng, pool);
      row.elapsed_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (row.full_residual)
        result.min_full_residual = std::min(result.min_full_residual, *row.full_residual);
      if (row.descent_violation)
        result.max_descent_violation =
            std::max(result.max_descent_violation, *row.descent_violation);
      if (cfg.record_trace) result.trace.push_back(row);
      if (row.residual <= cfg.residual_tol &&
          state.k - last_confirm >= static_cast<long long>(kConfirmCooldown)) {
        last_confirm = state.k;
        const double full = backend.full_residual(state.x, pool);
        result.min_full_residual = std::min(result.min_full_residual, full);
        if (full <= cfg.residual_tol) {
          result.final_full_residual = full;
          converged = true;
          break;
        }
      }
    } catch (const convergence_error& e) {
      throw solver_error(std::string("iteration ") + std::to_string(state.k) + ": " + e.what(),
                         state.k, std::move(result.trace));
    } catch (const numeric_error& e) {
      throw solver_error(std::string("iteration ") + std::to_string(state.k) + ": " + e.what(),
                         state.k, std::move(result.trace));
    }
  }

  result.final_x = state.x;
  result.final_objective = backend.objective(state.x);
  result.iterations = state.k;
  result.converged = converged;
  return result;
}

}  // namespace hyflexa
