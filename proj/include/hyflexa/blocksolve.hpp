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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "hyflexa/surrogate.hpp"

namespace hyflexa {

/// Result of one block subproblem: the (approximate) minimizer of the
/// surrogate-plus-G model over the block's feasible set.
struct BestResponse {
  int block = 0;
  Vec point;
  double achieved_accuracy = 0.0;  // certified bound on ||point - exact minimizer||
  bool exact = false;
};

/// How the per-block optimality measure E_i is formed from the best-response
/// distance d_i = ||xhat_i - x_i||: either d_i itself, or a per-block scaled
/// value guaranteed to stay inside [s_lower_i * d_i, s_upper_i * d_i].
struct ErrorBoundSpec {
  enum class Kind { exact_distance, scaled };

  Kind kind = Kind::exact_distance;
  std::vector<double> s_lower;
  std::vector<double> s_upper;

  static ErrorBoundSpec exact_distance() { return ErrorBoundSpec{}; }

  static ErrorBoundSpec scaled(std::vector<double> lo, std::vector<double> up) {
    if (lo.size() != up.size()) throw config_error("scaled error bound: size mismatch");
    for (std::size_t i = 0; i < lo.size(); ++i) {
      if (!(lo[i] > 0.0) || !(up[i] >= lo[i]))
        throw config_error("scaled error bound: need 0 < s_lower <= s_upper");
    }
    ErrorBoundSpec e;
    e.kind = Kind::scaled;
    e.s_lower = std::move(lo);
    e.s_upper = std::move(up);
    return e;
  }
};

inline double error_bound(const ErrorBoundSpec& spec, int i, double distance) {
  if (spec.kind == ErrorBoundSpec::Kind::exact_distance) return distance;
  const auto idx = static_cast<std::size_t>(i);
  if (idx >= spec.s_lower.size())
    throw std::invalid_argument("error_bound: block index out of range for scaled spec");
  return 0.5 * (spec.s_lower[idx] + spec.s_upper[idx]) * distance;
}

inline double error_bound(const ErrorBoundSpec& spec, const BestResponse& br, const Vec& x_block) {
  return error_bound(spec, br.block, (br.point - x_block).norm());
}

/// Per-block inexactness budget eps_i^k = gamma * a1 * min{a2, 1/||grad_i F||},
/// with min{a2, +inf} = a2 when the gradient norm is zero.
inline double inexactness_budget(double gamma_k, double block_grad_norm, double alpha1,
                                 double alpha2) {
  if (block_grad_norm == 0.0) return gamma_k * alpha1 * alpha2;
  return gamma_k * alpha1 * std::min(alpha2, 1.0 / block_grad_norm);
}

/// Inner-solver knobs. With best_effort set, hitting the iteration cap
/// returns the current point and its certificate instead of throwing; used
/// for diagnostics where an estimate beats an abort.
struct BlockSolveOptions {
  int max_iters = 10000;
  bool best_effort = false;
};

namespace detail {

inline double soft_scalar(double u, double kappa) {
  return std::copysign(std::max(std::abs(u) - kappa, 0.0), u);
}

/// Exact prox of the block model tau/2 ||z - v||^2 restricted to the block:
/// separable G prox composed with the box projection. Exact for G terms that
/// are separable per coordinate (the l1 case); the unconstrained and G == 0
/// cases are exact unconditionally.
inline Vec prox_project(const CompositeProblem& p, int i, const Vec& v, double t) {
  Vec z = p.separable ? p.separable->block_prox(i, v, t) : v;
  return project_block(p.feasible[static_cast<std::size_t>(i)], z);
}

inline bool g_is_zero(const CompositeProblem& p) {
  return p.l1_weight.has_value() && *p.l1_weight == 0.0;
}

/// Proximal-gradient loop on h = F~ + G_i over X_i with an exact optimality
/// certificate: after a step z+ = prox(z - a*grad(z)), the vector
/// (z - z+)/a - grad(z) + grad(z+) is a subgradient of h at z+, so
/// ||subgrad|| / q bounds the distance to the minimizer.
inline BestResponse prox_gradient_inner(const CompositeProblem& p, const BlockSurrogate& s,
                                        int i, double epsilon, const BlockSolveOptions& opts) {
  const double q = s.strong_convexity;
  double lip = s.gradient_lipschitz.value_or(q);
  Vec z = project_block(p.feasible[static_cast<std::size_t>(i)], s.anchor_block);
  double best = std::numeric_limits<double>::infinity();
  for (int t = 0; t < opts.max_iters; ++t) {
    const Vec g = s.grad_eval(z);
    double alpha = 1.0 / lip;
    Vec znext;
    // Backtrack until the quadratic upper model holds at the trial point.
    for (;;) {
      znext = prox_project(p, i, z - alpha * g, alpha);
      const Vec d = znext - z;
      const double lhs = s.value_eval(znext);
      const double rhs = s.value_eval(z) + g.dot(d) + 0.5 / alpha * d.squaredNorm();
      if (lhs <= rhs + 1e-12 * (1.0 + std::abs(rhs))) break;
      alpha *= 0.5;
      lip *= 2.0;
      if (alpha < 1e-18)
        throw numeric_error("block solve: backtracking step collapsed");
    }
    const Vec subgrad = (z - znext) / alpha - g + s.grad_eval(znext);
    const double cert = subgrad.norm() / q;
    z = znext;
    best = std::min(best, cert);
    if (cert <= epsilon || (opts.best_effort && t + 1 == opts.max_iters)) {
      BestResponse br;
      br.block = i;
      br.point = z;
      br.achieved_accuracy = cert;
      br.exact = false;
      return br;
    }
  }
  throw convergence_error("block solve: inner iteration cap exceeded", best);
}

/// Projected subgradient fallback for nonseparable G known only through its
/// value. The subgradient of z -> G(z, x_{-i}) is estimated by central
/// differences, so the stopping rule is heuristic rather than certified:
/// it stops once the estimated residual norm divided by q falls below eps.
inline BestResponse subgradient_inner(const CompositeProblem& p, const BlockSurrogate& s,
                                      int i, const Vec& x_k, double epsilon,
                                      const BlockSolveOptions& opts) {
  const int off = p.partition.offset(i);
  const int ni = p.partition.size(i);
  const double q = s.strong_convexity;
  Vec full = x_k;
  Vec z = project_block(p.feasible[static_cast<std::size_t>(i)], s.anchor_block);
  const double h = 1e-7;
  double best = std::numeric_limits<double>::infinity();
  for (int t = 1; t <= opts.max_iters; ++t) {
    full.segment(off, ni) = z;
    Vec sub = s.grad_eval(z);
    for (int j = 0; j < ni; ++j) {
      const double save = full[off + j];
      full[off + j] = save + h;
      const double gp = p.nonsmooth_eval(full);
      full[off + j] = save - h;
      const double gm = p.nonsmooth_eval(full);
      full[off + j] = save;
      sub[j] += (gp - gm) / (2.0 * h);
    }
    const double cert = sub.norm() / q;
    best = std::min(best, cert);
    if (cert <= epsilon || (opts.best_effort && t == opts.max_iters)) {
      BestResponse br;
      br.block = i;
      br.point = z;
      br.achieved_accuracy = cert;
      br.exact = false;
      return br;
    }
    const double step = 1.0 / (q * static_cast<double>(t));
    z = project_block(p.feasible[static_cast<std::size_t>(i)], z - step * sub);
  }
  throw convergence_error("block solve: subgradient iteration cap exceeded", best);
}

}  // namespace detail

/// Best response for block i at x_k: the minimizer of F~_i(.; x_k) + G over
/// X_i, exact where a closed form exists and within epsilon otherwise.
/// Safe to call concurrently for distinct blocks.
///
/// Closed forms:
///  - proximal-linear surrogate with G == 0 or an exact separable prox
///    (one prox step of the shifted anchor lands on the minimizer);
///  - regularized-Newton surrogate, G == 0, unconstrained block (direct
///    symmetric solve).
/// Everything else runs an inner solver until its certified distance to the
/// minimizer falls below epsilon.
inline BestResponse solve_block(const CompositeProblem& p, const BlockSurrogate& s, int i,
                                const Vec& x_k, double epsilon,
                                const BlockSolveOptions& opts = {}) {
  if (epsilon < 0.0) throw config_error("solve_block: epsilon must be nonnegative");
  const auto& feas = p.feasible[static_cast<std::size_t>(i)];

  if (s.variant == SurrogateKind::Variant::proximal_linear) {
    const bool prox_exact =
        detail::g_is_zero(p) ||
        (p.separable &&
         (feas.kind == FeasibleBlock::Kind::unconstrained || p.l1_weight.has_value()));
    if (prox_exact) {
      const double tau = s.strong_convexity;
      const Vec v = s.anchor_block - s.anchor_gradient / tau;
      BestResponse br;
      br.block = i;
      br.point = detail::prox_project(p, i, v, 1.0 / tau);
      br.achieved_accuracy = 0.0;
      br.exact = true;
      return br;
    }
  }

  if (s.variant == SurrogateKind::Variant::regularized_newton && detail::g_is_zero(p) &&
      feas.kind == FeasibleBlock::Kind::unconstrained) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(*s.quadratic_hessian);
    if (ldlt.info() != Eigen::Success)
      throw numeric_error("solve_block: regularized Hessian factorization failed");
    BestResponse br;
    br.block = i;
    br.point = s.anchor_block - ldlt.solve(s.anchor_gradient);
    br.achieved_accuracy = 0.0;
    br.exact = true;
    return br;
  }

  // Scalar block, l1-structured G, quadratic surrogate: the minimizer is a
  // soft threshold of the Newton point (clamped for boxes).
  if (p.partition.size(i) == 1 && p.l1_weight) {
    double curvature = 0.0;
    bool quadratic = false;
    if (s.variant == SurrogateKind::Variant::regularized_newton) {
      curvature = (*s.quadratic_hessian)(0, 0);
      quadratic = true;
    } else if (s.variant == SurrogateKind::Variant::exact_block && p.smooth_block_quadratic) {
      Vec probe = s.anchor_block;
      probe[0] += 1.0;
      curvature = s.grad_eval(probe)[0] - s.grad_eval(s.anchor_block)[0];
      quadratic = true;
    }
    if (quadratic) {
      if (!(curvature > 0.0))
        throw numeric_error("solve_block: degenerate scalar subproblem (zero curvature)");
      const double z0 = s.anchor_block[0];
      const double g0 = s.grad_eval(s.anchor_block)[0];
      const double z =
          detail::soft_scalar((curvature * z0 - g0) / curvature, *p.l1_weight / curvature);
      Vec point(1);
      point[0] = z;
      BestResponse br;
      br.block = i;
      br.point = project_block(feas, point);
      br.achieved_accuracy = 0.0;
      br.exact = true;
      return br;
    }
  }

  if (epsilon == 0.0)
    throw config_error("solve_block: exact solve requested but no closed form applies "
                       "(set a positive inexactness budget)");

  if (p.separable || detail::g_is_zero(p))
    return detail::prox_gradient_inner(p, s, i, epsilon, opts);
  return detail::subgradient_inner(p, s, i, x_k, epsilon, opts);
}

}  // namespace hyflexa
