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

#include "hyflexa/blocksolve.hpp"
#include "hyflexa/driver.hpp"
#include "hyflexa/surrogate.hpp"

namespace hyflexa {

/// Solver backend for an arbitrary composite problem: surrogates are built
/// per sampled block at the current iterate and handed to solve_block. One
/// full gradient evaluation per iteration is shared by all blocks.
class GenericBackend {
 public:
  struct Slot {
    Vec z;
    Vec x_old;
    double dist = 0.0;
    double q = 0.0;
    bool exact = false;
  };

  GenericBackend(const CompositeProblem& problem, SurrogateKind kind,
                 BlockSolveOptions opts = {})
      : prob_(&problem), kind_(std::move(kind)), opts_(opts) {}

  int n_blocks() const { return prob_->partition.n_blocks(); }
  const CompositeProblem& problem() const { return *prob_; }

  void check_start(const Vec& x0) const {
    check_dimension(*prob_, x0, "solver start point");
    if (!is_feasible(*prob_, x0))
      throw std::invalid_argument("solver start point is infeasible");
  }

  void reset(const Vec&) {}

  void begin_iteration(const Vec& x) { grad_cache_ = prob_->gradient_eval(x); }

  double block_grad_norm(int i, const Vec&) const {
    return grad_cache_.segment(prob_->partition.offset(i), prob_->partition.size(i)).norm();
  }

  Slot solve_block_sampled(int i, const Vec& x, double eps) const {
    const BlockSurrogate s = build_surrogate(kind_, *prob_, i, x, &grad_cache_);
    const BestResponse br = solve_block(*prob_, s, i, x, eps, opts_);
    Slot slot;
    slot.z = br.point;
    slot.x_old = x.segment(prob_->partition.offset(i), prob_->partition.size(i));
    slot.dist = (br.point - slot.x_old).norm();
    slot.q = s.strong_convexity;
    slot.exact = br.exact;
    return slot;
  }

  double objective(const Vec& x) const { return eval_objective(*prob_, x); }

  void apply_update(Vec& x, const std::vector<int>& sampled, const std::vector<Slot>& slots,
                    const std::vector<int>& kept, double gamma) {
    for (int block : kept) {
      const auto pos = static_cast<std::size_t>(
          std::lower_bound(sampled.begin(), sampled.end(), block) - sampled.begin());
      const int off = prob_->partition.offset(block);
      const int ni = prob_->partition.size(block);
      x.segment(off, ni) += gamma * (slots[pos].z - x.segment(off, ni));
    }
  }

  double full_residual(const Vec& x, WorkerPool& pool) {
    begin_iteration(x);
    const int n = n_blocks();
    // Diagnostic sweep: inner solves run best-effort so a slowly certifying
    // path degrades the estimate instead of aborting the run.
    BlockSolveOptions diag_opts = opts_;
    diag_opts.best_effort = true;
    std::vector<double> diff_sq(static_cast<std::size_t>(n));
    pool.for_range(n, [&](int i) {
      const BlockSurrogate s = build_surrogate(kind_, *prob_, i, x, &grad_cache_);
      const BestResponse br = solve_block(*prob_, s, i, x, diagnostic_eps_, diag_opts);
      diff_sq[static_cast<std::size_t>(i)] =
          (br.point - x.segment(prob_->partition.offset(i), prob_->partition.size(i)))
              .squaredNorm();
    });
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += diff_sq[static_cast<std::size_t>(i)];
    return std::sqrt(sum);
  }

  void accumulate_descent(int block, const Vec& x, const Slot& slot, double& grad_dot,
                          double& dist_sq, double& g_diff, double& q) const {
    const int off = prob_->partition.offset(block);
    const int ni = prob_->partition.size(block);
    const Vec d = slot.z - slot.x_old;
    grad_dot += grad_cache_.segment(off, ni).dot(d);
    dist_sq += d.squaredNorm();
    if (prob_->separable) {
      g_diff += prob_->separable->block_value(block, slot.x_old) -
                prob_->separable->block_value(block, slot.z);
    } else {
      Vec full = x;
      full.segment(off, ni) = slot.z;
      g_diff += prob_->nonsmooth_eval(x) - prob_->nonsmooth_eval(full);
    }
    q = std::min(q, slot.q);
  }

 private:
  const CompositeProblem* prob_;
  SurrogateKind kind_;
  BlockSolveOptions opts_;
  Vec grad_cache_;
  double diagnostic_eps_ = 1e-12;
};

}  // namespace hyflexa
