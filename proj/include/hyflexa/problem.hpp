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

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyflexa/feasible.hpp"
#include "hyflexa/partition.hpp"
#include "hyflexa/rng.hpp"

namespace hyflexa {

/// Per-block access to a separable convex term G(x) = sum_i G_i(x_i).
/// block_prox(i, v, t) returns argmin_z { t*G_i(z) + 0.5*||z - v||^2 } and
/// must be exact; it is what makes closed-form block solves possible.
struct SeparableNonsmooth {
  std::function<double(int, const Vec&)> block_value;
  std::function<Vec(int, const Vec&, double)> block_prox;
};

/// Composite problem: minimize V(x) = F(x) + G(x) over X = X_1 x ... x X_N
/// with smooth (possibly nonconvex) F and convex (possibly nonsmooth) G.
///
/// Evaluators must be safe for concurrent read-only invocation from several
/// workers; they may not keep mutable state between calls.
struct CompositeProblem {
  BlockPartition partition;

  std::function<double(const Vec&)> smooth_eval;    // F
  std::function<Vec(const Vec&)> gradient_eval;     // grad F, length n
  std::function<double(const Vec&)> nonsmooth_eval; // G, convex

  /// Present iff G is separable across blocks.
  std::optional<SeparableNonsmooth> separable;

  /// Set when G(x) = l1_weight * ||x||_1; enables the exact stationarity
  /// checker and closed-form scalar solves.
  std::optional<double> l1_weight;

  /// Declares that F restricted to any single block (others fixed) is a
  /// quadratic, so block surrogates built from F itself have affine
  /// gradients and scalar subproblems admit exact closed forms.
  bool smooth_block_quadratic = false;

  std::vector<FeasibleBlock> feasible;

  std::optional<double> smooth_lipschitz_hint;  // L_F, unused by the solver

  bool nonsmooth_separable() const { return separable.has_value(); }

  Eigen::VectorBlock<const Vec> block_of(const Vec& x, int i) const {
    return x.segment(partition.offset(i), partition.size(i));
  }
};

inline void check_dimension(const CompositeProblem& p, const Vec& x, const char* who) {
  if (static_cast<int>(x.size()) != p.partition.total_dim())
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

/// V(x) = F(x) + G(x).
inline double eval_objective(const CompositeProblem& p, const Vec& x) {
  check_dimension(p, x, "eval_objective");
  const double f = p.smooth_eval(x);
  if (!std::isfinite(f)) throw numeric_error("eval_objective: smooth term F is not finite");
  const double g = p.nonsmooth_eval(x);
  if (!std::isfinite(g)) throw numeric_error("eval_objective: nonsmooth term G is not finite");
  return f + g;
}

/// Slice of grad F(x) belonging to block i.
inline Vec eval_block_gradient(const CompositeProblem& p, int i, const Vec& x) {
  check_dimension(p, x, "eval_block_gradient");
  const Vec g = p.gradient_eval(x);
  return g.segment(p.partition.offset(i), p.partition.size(i));
}

inline bool is_feasible(const CompositeProblem& p, const Vec& x) {
  for (int i = 0; i < p.partition.n_blocks(); ++i) {
    if (!block_contains(p.feasible[i], p.block_of(x, i))) return false;
  }
  return true;
}

/// Central finite differences against gradient_eval at sampled feasible
/// points. Returns the worst relative deviation seen.
inline double validate_gradient_consistency(const CompositeProblem& p,
                                            SplitMix64& rng, int n_points,
                                            int coords_per_point = 8) {
  const int n = p.partition.total_dim();
  double worst = 0.0;
  for (int t = 0; t < n_points; ++t) {
    Vec x(n);
    for (int j = 0; j < n; ++j) x[j] = 2.0 * rng.next_double() - 1.0;
    for (int i = 0; i < p.partition.n_blocks(); ++i) {
      const Vec xi = project_block(p.feasible[i], p.block_of(x, i));
      x.segment(p.partition.offset(i), p.partition.size(i)) = xi;
    }
    const Vec g = p.gradient_eval(x);
    for (int c = 0; c < coords_per_point; ++c) {
      const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
      const double h = 1e-6 * (1.0 + std::abs(x[j]));
      Vec xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      const double fd = (p.smooth_eval(xp) - p.smooth_eval(xm)) / (2.0 * h);
      const double rel = std::abs(fd - g[j]) / (1.0 + std::abs(g[j]));
      if (rel > worst) worst = rel;
    }
  }
  return worst;
}

/// Midpoint convexity of G on sampled pairs; returns the worst violation of
/// G((x+y)/2) <= (G(x)+G(y))/2.
inline double validate_nonsmooth_convexity(const CompositeProblem& p,
                                           SplitMix64& rng, int n_pairs) {
  const int n = p.partition.total_dim();
  double worst = 0.0;
  for (int t = 0; t < n_pairs; ++t) {
    Vec x(n), y(n);
    for (int j = 0; j < n; ++j) {
      x[j] = 2.0 * rng.next_double() - 1.0;
      y[j] = 2.0 * rng.next_double() - 1.0;
    }
    const double lhs = p.nonsmooth_eval(0.5 * (x + y));
    const double rhs = 0.5 * (p.nonsmooth_eval(x) + p.nonsmooth_eval(y));
    worst = std::max(worst, lhs - rhs);
  }
  return worst;
}

/// G(x) = c * ||x||_1 with exact per-coordinate prox (soft threshold).
inline void attach_l1_term(CompositeProblem& p, double c) {
  p.l1_weight = c;
  p.nonsmooth_eval = [c](const Vec& x) { return c * x.lpNorm<1>(); };
  SeparableNonsmooth sep;
  sep.block_value = [c, part = p.partition](int i, const Vec& xi) {
    (void)i;
    return c * xi.lpNorm<1>();
  };
  sep.block_prox = [c](int, const Vec& v, double t) {
    Vec out(v.size());
    const double k = c * t;
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      out[j] = std::copysign(std::max(std::abs(v[j]) - k, 0.0), v[j]);
    }
    return out;
  };
  p.separable = std::move(sep);
}

inline void attach_zero_nonsmooth(CompositeProblem& p) {
  p.nonsmooth_eval = [](const Vec&) { return 0.0; };
  SeparableNonsmooth sep;
  sep.block_value = [](int, const Vec&) { return 0.0; };
  sep.block_prox = [](int, const Vec& v, double) { return v; };
  p.separable = std::move(sep);
  p.l1_weight = 0.0;
}

}  // namespace hyflexa
