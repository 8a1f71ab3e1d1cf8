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
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "hyflexa/lasso.hpp"
#include "hyflexa/rng.hpp"

namespace hyflexa {

/// Synthetic LASSO instance with a certified optimum.
///
/// Construction: pick a designated solution x* with exactly
/// round(n * s_sol / 100) nonzeros and a residual r* ~ N(0, I); draw each
/// column of A with a Bernoulli(s_A / 100) sparsity mask and uniform [-1,1]
/// values, then rescale it so the optimality conditions of
/// ||Ax - b||^2 + c ||x||_1 hold at x* exactly:
///   a_i^T r* = -(c/2) sign(x*_i)   on the support,
///   |a_i^T r*| <= c/2              off the support,
/// and set b = A x* - r*. V* is re-evaluated from the stored data so the
/// certificate matches the serialized instance bit for bit.
///
/// s_A in (0, 100], s_sol in [0, 100]. Zero or degenerate columns are redrawn
/// internally; valid inputs never fail.
inline LassoProblem generate_nesterov(int m, int n, double s_A, double s_sol,
                                      std::uint64_t seed, double c = 1.0) {
  if (m < 1 || n < 1) throw config_error("generator: m and n must be >= 1");
  if (!(s_A > 0.0 && s_A <= 100.0)) throw config_error("generator: s_A must be in (0, 100]");
  if (!(s_sol >= 0.0 && s_sol <= 100.0))
    throw config_error("generator: s_sol must be in [0, 100]");
  if (!(c > 0.0)) throw config_error("generator: c must be positive");

  SplitMix64 rng(seed);

  Vec r_star(m);
  for (int j = 0; j < m; ++j) r_star[j] = rng.next_normal();

  const int support_size = static_cast<int>(std::llround(static_cast<double>(n) * s_sol / 100.0));
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  for (int t = 0; t < support_size; ++t) {
    const int swap_with = t + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - t)));
    std::swap(perm[static_cast<std::size_t>(t)], perm[static_cast<std::size_t>(swap_with)]);
  }
  std::vector<char> on_support(static_cast<std::size_t>(n), 0);
  for (int t = 0; t < support_size; ++t) on_support[static_cast<std::size_t>(perm[static_cast<std::size_t>(t)])] = 1;

  Vec x_star = Vec::Zero(n);
  for (int t = 0; t < support_size; ++t) {
    double v = 0.0;
    do {
      v = 2.0 * rng.next_double() - 1.0;
    } while (std::abs(v) < 0.1);
    x_star[perm[static_cast<std::size_t>(t)]] = v;
  }

  const double p_entry = s_A / 100.0;
  const double r_norm = r_star.norm();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(
      std::min<double>(static_cast<double>(m) * n, p_entry * m * n * 1.2 + 16.0)));

  std::vector<int> rows;
  std::vector<double> vals;
  for (int i = 0; i < n; ++i) {
    double dot = 0.0;
    double norm_sq = 0.0;
    for (int attempt = 0;; ++attempt) {
      rows.clear();
      vals.clear();
      for (int row = 0; row < m; ++row) {
        if (rng.next_double() < p_entry) {
          double v = 0.0;
          do {
            v = 2.0 * rng.next_double() - 1.0;
          } while (v == 0.0);
          rows.push_back(row);
          vals.push_back(v);
        }
      }
      if (rows.empty()) {
        // Keep the column structurally nonzero.
        rows.push_back(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(m))));
        double v = 0.0;
        do {
          v = 2.0 * rng.next_double() - 1.0;
        } while (v == 0.0);
        vals.push_back(v);
      }
      dot = 0.0;
      norm_sq = 0.0;
      for (std::size_t t = 0; t < rows.size(); ++t) {
        dot += vals[t] * r_star[rows[t]];
        norm_sq += vals[t] * vals[t];
      }
      // A near-orthogonal draw would need an enormous rescale, which skews
      // the column norms (and the conditioning) arbitrarily; redraw it like
      // a zero column.
      if (std::abs(dot) > 1e-2 * std::max(1e-30, std::sqrt(norm_sq) * r_norm) || attempt >= 100)
        break;
    }

    double scale;
    if (on_support[static_cast<std::size_t>(i)]) {
      scale = -(c / 2.0) * (x_star[i] > 0.0 ? 1.0 : -1.0) / dot;
    } else {
      double u = 0.0;
      do {
        u = rng.next_double();
      } while (u == 0.0);
      scale = u * (c / 2.0) / std::abs(dot);
    }
    for (std::size_t t = 0; t < rows.size(); ++t) {
      triplets.emplace_back(rows[t], i, vals[t] * scale);
    }
  }

  SpMat A(m, n);
  A.setFromTriplets(triplets.begin(), triplets.end());

  Vec b = Vec::Zero(m);
  for (int i = 0; i < n; ++i) {
    const double xi = x_star[i];
    if (xi == 0.0) continue;
    for (SpMat::InnerIterator it(A, i); it; ++it) b[it.row()] += it.value() * xi;
  }
  b -= r_star;

  LassoProblem problem(std::move(A), std::move(b), c);

  // Certify V* against the stored data, not the construction intermediates.
  const Vec residual = ResidualCache::compute(problem, x_star);
  double v_star = 0.0;
  for (int j = 0; j < m; ++j) v_star += residual[j] * residual[j];
  double l1 = 0.0;
  for (int i = 0; i < n; ++i) l1 += std::abs(x_star[i]);
  v_star += c * l1;

  problem.known_optimum = LassoProblem::KnownOptimum{std::move(x_star), v_star};
  return problem;
}

/// (V(x) - V*) / V*, the convergence metric for generated instances.
inline double relative_error(const LassoProblem& p, double objective) {
  if (!p.known_optimum) throw config_error("relative_error: instance has no certified optimum");
  return (objective - p.known_optimum->v_star) / p.known_optimum->v_star;
}

}  // namespace hyflexa
