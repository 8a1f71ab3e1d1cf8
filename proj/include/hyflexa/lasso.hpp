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

#include <Eigen/SparseCore>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "hyflexa/driver.hpp"
#include "hyflexa/problem.hpp"

namespace hyflexa {

using SpMat = Eigen::SparseMatrix<double>;  // compressed sparse column

/// sign(u) * max(|u| - kappa, 0), the prox of kappa * |.|.
inline double soft_threshold(double u, double kappa) {
  return std::copysign(std::max(std::abs(u) - kappa, 0.0), u);
}

/// minimize ||A x - b||^2 + c ||x||_1 over scalar blocks (one per column).
///
/// Note the objective carries no 1/2 factor, so grad F = 2 A^T (A x - b) and
/// the zero-coordinate stationarity threshold is c/2.
struct LassoProblem {
  SpMat A;
  Vec b;
  double c = 1.0;
  Vec column_sq_norms;

  struct KnownOptimum {
    Vec x_star;
    double v_star = 0.0;
  };
  std::optional<KnownOptimum> known_optimum;

  LassoProblem() = default;

  LassoProblem(SpMat a, Vec rhs, double l1_weight)
      : A(std::move(a)), b(std::move(rhs)), c(l1_weight) {
    if (!(c > 0.0)) throw config_error("lasso: l1 weight must be positive");
    if (A.rows() != b.size()) throw config_error("lasso: A and b row counts differ");
    A.makeCompressed();
    column_sq_norms.resize(A.cols());
    for (int j = 0; j < A.cols(); ++j) {
      double s = 0.0;
      for (SpMat::InnerIterator it(A, j); it; ++it) s += it.value() * it.value();
      column_sq_norms[j] = s;
    }
  }

  int m() const { return static_cast<int>(A.rows()); }
  int n() const { return static_cast<int>(A.cols()); }
};

/// Residual r = A x - b maintained incrementally so each scalar best response
/// costs O(nnz(a_i)). A full recompute every `resync_interval` updates guards
/// against drift.
struct ResidualCache {
  Vec r;
  long generation = 0;
  int resync_interval = 1000;
  long updates_since_resync = 0;

  void reset(const LassoProblem& p, const Vec& x) {
    r = compute(p, x);
    generation = 0;
    updates_since_resync = 0;
  }

  static Vec compute(const LassoProblem& p, const Vec& x) {
    Vec out = Vec::Zero(p.m());
    for (int j = 0; j < p.n(); ++j) {
      const double xj = x[j];
      if (xj == 0.0) continue;
      for (SpMat::InnerIterator it(p.A, j); it; ++it) out[it.row()] += it.value() * xj;
    }
    out -= p.b;
    return out;
  }

  /// Drift ||r - (Ax - b)|| against a fresh recompute; does not modify r.
  double drift(const LassoProblem& p, const Vec& x) const {
    return (r - compute(p, x)).norm();
  }
};

/// a_i^T r for the current residual.
inline double column_dot_residual(const LassoProblem& p, int i, const Vec& r) {
  double s = 0.0;
  for (SpMat::InnerIterator it(p.A, i); it; ++it) s += it.value() * r[it.row()];
  return s;
}

/// Exact scalar best response for column i:
///   argmin_z F(z, x_{-i}) + (tau_i/2)(z - x_i)^2 + c |z|
/// computed as soft_threshold(u_i, c/q_i) with q_i = 2||a_i||^2 + tau_i and
/// u_i = (2(||a_i||^2 x_i - a_i^T r) + tau_i x_i) / q_i.
inline double lasso_best_response(const LassoProblem& p, int i, const Vec& x_k,
                                  const ResidualCache& cache, double tau_i) {
  const double csq = p.column_sq_norms[i];
  const double q = 2.0 * csq + tau_i;
  if (q == 0.0)
    throw numeric_error("lasso best response: degenerate subproblem (zero column and tau = 0)");
  const double xi = x_k[i];
  const double atr = column_dot_residual(p, i, cache.r);
  const double u = (2.0 * (csq * xi - atr) + tau_i * xi) / q;
  return soft_threshold(u, p.c / q);
}

/// One sparse block update: for each (i, z_i) pair, x_i += gamma (z_i - x_i)
/// and r += gamma (z_i - x_i) a_i, applied in the given order. Cost is
/// O(sum nnz(a_i)) over the touched columns.
inline void apply_update(const LassoProblem& p, ResidualCache& cache, Vec& x,
                         const std::vector<std::pair<int, double>>& z_hat, double gamma) {
  for (const auto& [i, z] : z_hat) {
    const double delta = gamma * (z - x[i]);
    x[i] += delta;
    for (SpMat::InnerIterator it(p.A, i); it; ++it) cache.r[it.row()] += it.value() * delta;
  }
  cache.generation += 1;
  cache.updates_since_resync += 1;
  if (cache.resync_interval > 0 && cache.updates_since_resync >= cache.resync_interval) {
    cache.r = ResidualCache::compute(p, x);
    cache.updates_since_resync = 0;
  }
}

/// Default proximal weights tau_i = 1e-3 * (2 ||a_i||^2).
inline std::vector<double> default_lasso_tau(const LassoProblem& p) {
  std::vector<double> tau(static_cast<std::size_t>(p.n()));
  for (int i = 0; i < p.n(); ++i) tau[static_cast<std::size_t>(i)] = 1e-3 * (2.0 * p.column_sq_norms[i]);
  return tau;
}

inline double lasso_objective(const LassoProblem& p, const Vec& r, const Vec& x) {
  double f = 0.0;
  for (int j = 0; j < p.m(); ++j) f += r[j] * r[j];
  double g = 0.0;
  for (int i = 0; i < p.n(); ++i) g += std::abs(x[i]);
  return f + p.c * g;
}

/// View of a LASSO instance through the generic composite interface, with
/// scalar blocks and the l1 structure tag set. The returned problem keeps a
/// pointer into `p`, which must outlive it.
inline CompositeProblem as_composite(const LassoProblem& p) {
  CompositeProblem cp;
  cp.partition = BlockPartition::scalar(p.n());
  const LassoProblem* lp = &p;
  cp.smooth_eval = [lp](const Vec& x) { return (lp->A * x - lp->b).squaredNorm(); };
  cp.gradient_eval = [lp](const Vec& x) -> Vec {
    return 2.0 * (lp->A.transpose() * (lp->A * x - lp->b));
  };
  cp.smooth_block_quadratic = true;
  attach_l1_term(cp, p.c);
  cp.feasible.reserve(static_cast<std::size_t>(p.n()));
  for (int i = 0; i < p.n(); ++i) cp.feasible.push_back(FeasibleBlock::unconstrained(1));
  return cp;
}

/// Solver backend for the scalar-block LASSO specialization. Every block
/// solve is the exact closed form, so the inexactness budget is moot.
class LassoBackend {
 public:
  struct Slot {
    double z = 0.0;
    double x_old = 0.0;  // x_i at solve time
    double dist = 0.0;
    double grad = 0.0;   // grad_i F(x^k) = 2 a_i^T r
    double q = 0.0;      // 2||a_i||^2 + tau_i
    bool exact = true;
  };

  LassoBackend(const LassoProblem& problem, std::vector<double> tau)
      : prob_(&problem), tau_(std::move(tau)) {
    if (static_cast<int>(tau_.size()) != prob_->n())
      throw config_error("lasso backend: tau must have one entry per column");
  }

  explicit LassoBackend(const LassoProblem& problem)
      : LassoBackend(problem, default_lasso_tau(problem)) {}

  int n_blocks() const { return prob_->n(); }
  const LassoProblem& problem() const { return *prob_; }
  const ResidualCache& cache() const { return cache_; }
  ResidualCache& cache() { return cache_; }
  const std::vector<double>& tau() const { return tau_; }

  void check_start(const Vec& x0) const {
    if (static_cast<int>(x0.size()) != prob_->n())
      throw std::invalid_argument("lasso backend: start point has wrong dimension");
  }

  void reset(const Vec& x0) { cache_.reset(*prob_, x0); }
  void begin_iteration(const Vec&) {}

  double block_grad_norm(int i, const Vec&) const {
    return std::abs(2.0 * column_dot_residual(*prob_, i, cache_.r));
  }

  Slot solve_block_sampled(int i, const Vec& x, double /*eps*/) const {
    const double csq = prob_->column_sq_norms[i];
    const double tau = tau_[static_cast<std::size_t>(i)];
    const double q = 2.0 * csq + tau;
    if (q == 0.0)
      throw numeric_error("lasso best response: degenerate subproblem (zero column and tau = 0)");
    const double xi = x[i];
    const double atr = column_dot_residual(*prob_, i, cache_.r);
    const double u = (2.0 * (csq * xi - atr) + tau * xi) / q;
    Slot s;
    s.z = soft_threshold(u, prob_->c / q);
    s.x_old = xi;
    s.dist = std::abs(s.z - xi);
    s.grad = 2.0 * atr;
    s.q = q;
    return s;
  }

  double objective(const Vec& x) const { return lasso_objective(*prob_, cache_.r, x); }

  void apply_update(Vec& x, const std::vector<int>& sampled, const std::vector<Slot>& slots,
                    const std::vector<int>& kept, double gamma) {
    std::vector<std::pair<int, double>> z_hat;
    z_hat.reserve(kept.size());
    for (int block : kept) {
      const auto pos = static_cast<std::size_t>(
          std::lower_bound(sampled.begin(), sampled.end(), block) - sampled.begin());
      z_hat.emplace_back(block, slots[pos].z);
    }
    hyflexa::apply_update(*prob_, cache_, x, z_hat, gamma);
  }

  double full_residual(const Vec& x, WorkerPool& pool) const {
    const int n = prob_->n();
    std::vector<double> diff_sq(static_cast<std::size_t>(n));
    pool.for_range(n, [&](int i) {
      const double z = lasso_best_response(*prob_, i, x, cache_, tau_[static_cast<std::size_t>(i)]);
      const double d = z - x[i];
      diff_sq[static_cast<std::size_t>(i)] = d * d;
    });
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += diff_sq[static_cast<std::size_t>(i)];
    return std::sqrt(s);
  }

  void accumulate_descent(int /*block*/, const Vec& /*x*/, const Slot& slot, double& grad_dot,
                          double& dist_sq, double& g_diff, double& q) const {
    const double d = slot.z - slot.x_old;
    grad_dot += slot.grad * d;
    dist_sq += d * d;
    g_diff += prob_->c * (std::abs(slot.x_old) - std::abs(slot.z));
    q = std::min(q, slot.q);
  }

 private:
  const LassoProblem* prob_;
  std::vector<double> tau_;
  ResidualCache cache_;
};

}  // namespace hyflexa
