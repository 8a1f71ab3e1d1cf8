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
#include <functional>
#include <limits>
#include <optional>
#include <utility>

#include "hyflexa/problem.hpp"

namespace hyflexa {

/// How to build the per-block strongly convex model of F at the anchor.
struct SurrogateKind {
  enum class Variant {
    proximal_linear,     // linearize F, add (tau_i/2)||z - x_i||^2
    regularized_newton,  // quadratic model with Hessian + q_shift * I
    exact_block          // F itself in the block, plus optional padding
  };

  Variant variant = Variant::proximal_linear;

  // proximal_linear: per-block proximal weights (broadcast of a scalar is
  // handled by the factory). All must be positive.
  std::vector<double> tau;

  // regularized_newton
  double q_shift = 0.0;
  std::function<Eigen::MatrixXd(int, const Vec&)> hessian_eval;

  // exact_block: (pad/2)||z - x_i||^2 added so the model is strongly convex
  // even when F(., x_{-i}) is merely convex.
  double strong_convexity_pad = 0.0;

  static SurrogateKind proximal_linear(std::vector<double> tau_per_block) {
    SurrogateKind k;
    k.variant = Variant::proximal_linear;
    k.tau = std::move(tau_per_block);
    return k;
  }

  static SurrogateKind proximal_linear_uniform(double tau, int n_blocks) {
    return proximal_linear(std::vector<double>(static_cast<std::size_t>(n_blocks), tau));
  }

  static SurrogateKind regularized_newton(double q_shift,
                                          std::function<Eigen::MatrixXd(int, const Vec&)> hess) {
    SurrogateKind k;
    k.variant = Variant::regularized_newton;
    k.q_shift = q_shift;
    k.hessian_eval = std::move(hess);
    return k;
  }

  static SurrogateKind exact_block(double pad) {
    SurrogateKind k;
    k.variant = Variant::exact_block;
    k.strong_convexity_pad = pad;
    return k;
  }
};

/// A built per-block model F~_i(.; x^k): value and gradient over the block
/// variable, its strong convexity constant, and the anchor it was built at.
/// Evaluations are pure, so surrogates for different blocks can be built and
/// queried concurrently.
struct BlockSurrogate {
  SurrogateKind::Variant variant = SurrogateKind::Variant::proximal_linear;
  int block = 0;
  Vec anchor_block;                          // x_i^k
  Vec anchor_gradient;                       // grad_i F(x^k)
  double anchor_value = 0.0;                 // F(x^k)
  double strong_convexity = 0.0;             // q > 0
  std::optional<double> gradient_lipschitz;  // known for the quadratic kinds
  std::optional<Eigen::MatrixXd> quadratic_hessian;  // regularized-newton only

  std::function<double(const Vec&)> value_eval;
  std::function<Vec(const Vec&)> grad_eval;
};

namespace detail {

/// Lower bound for the strong convexity of F(., x_{-i}) by sampled gradient
/// monotonicity around the anchor. Used only when an exact-block surrogate is
/// requested with zero padding; the bound is an estimate, not a certificate.
inline double estimate_block_strong_convexity(const CompositeProblem& p, int i,
                                              const Vec& anchor_x) {
  const int off = p.partition.offset(i);
  const int ni = p.partition.size(i);
  SplitMix64 rng(0x5bd1e995u ^ static_cast<std::uint64_t>(i));
  double q = std::numeric_limits<double>::infinity();
  Vec xu = anchor_x, xv = anchor_x;
  for (int t = 0; t < 8; ++t) {
    for (int j = 0; j < ni; ++j) {
      xu[off + j] = anchor_x[off + j] + (2.0 * rng.next_double() - 1.0);
      xv[off + j] = anchor_x[off + j] + (2.0 * rng.next_double() - 1.0);
    }
    const Vec gu = p.gradient_eval(xu).segment(off, ni);
    const Vec gv = p.gradient_eval(xv).segment(off, ni);
    const Vec d = xu.segment(off, ni) - xv.segment(off, ni);
    const double dd = d.squaredNorm();
    if (dd < 1e-20) continue;
    q = std::min(q, (gu - gv).dot(d) / dd);
  }
  if (!std::isfinite(q) || q <= 0.0)
    throw numeric_error("exact-block surrogate: could not certify strong convexity; "
                        "use a positive strong_convexity_pad");
  return 0.9 * q;
}

}  // namespace detail

/// Build the block-i surrogate anchored at anchor_x. When the caller already
/// holds grad F(anchor_x), pass it to avoid a re-evaluation.
inline BlockSurrogate build_surrogate(const SurrogateKind& kind, const CompositeProblem& p,
                                      int i, const Vec& anchor_x,
                                      const Vec* full_gradient = nullptr) {
  check_dimension(p, anchor_x, "build_surrogate");
  const int off = p.partition.offset(i);
  const int ni = p.partition.size(i);

  BlockSurrogate s;
  s.variant = kind.variant;
  s.block = i;
  s.anchor_block = anchor_x.segment(off, ni);

  switch (kind.variant) {
    case SurrogateKind::Variant::proximal_linear: {
      if (static_cast<int>(kind.tau.size()) != p.partition.n_blocks())
        throw config_error("proximal-linear surrogate: tau must have one entry per block");
      const double tau = kind.tau[static_cast<std::size_t>(i)];
      if (!(tau > 0.0)) throw config_error("proximal-linear surrogate: tau must be positive");
      const double f0 = p.smooth_eval(anchor_x);
      const Vec g = full_gradient ? full_gradient->segment(off, ni).eval()
                                  : eval_block_gradient(p, i, anchor_x);
      s.anchor_value = f0;
      s.anchor_gradient = g;
      s.strong_convexity = tau;
      s.gradient_lipschitz = tau;
      const Vec anchor = s.anchor_block;
      s.value_eval = [f0, g, tau, anchor](const Vec& z) {
        const Vec d = z - anchor;
        return f0 + g.dot(d) + 0.5 * tau * d.squaredNorm();
      };
      s.grad_eval = [g, tau, anchor](const Vec& z) -> Vec { return g + tau * (z - anchor); };
      break;
    }
    case SurrogateKind::Variant::regularized_newton: {
      if (!kind.hessian_eval)
        throw config_error("regularized-newton surrogate: missing hessian evaluator");
      if (kind.q_shift < 0.0)
        throw config_error("regularized-newton surrogate: q_shift must be nonnegative");
      const double f0 = p.smooth_eval(anchor_x);
      const Vec g = full_gradient ? full_gradient->segment(off, ni).eval()
                                  : eval_block_gradient(p, i, anchor_x);
      Eigen::MatrixXd h = kind.hessian_eval(i, anchor_x);
      if (h.rows() != ni || h.cols() != ni)
        throw config_error("regularized-newton surrogate: hessian block has wrong shape");
      h.diagonal().array() += kind.q_shift;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
      const double lambda_min = eig.eigenvalues().minCoeff();
      const double lambda_max = eig.eigenvalues().maxCoeff();
      if (!(lambda_min > 0.0))
        throw numeric_error("regularized-newton surrogate: regularized Hessian is not "
                            "positive definite");
      s.anchor_value = f0;
      s.anchor_gradient = g;
      s.strong_convexity = lambda_min;
      s.gradient_lipschitz = lambda_max;
      s.quadratic_hessian = h;
      const Vec anchor = s.anchor_block;
      s.value_eval = [f0, g, h, anchor](const Vec& z) {
        const Vec d = z - anchor;
        return f0 + g.dot(d) + 0.5 * d.dot(h * d);
      };
      s.grad_eval = [g, h, anchor](const Vec& z) -> Vec { return g + h * (z - anchor); };
      break;
    }
    case SurrogateKind::Variant::exact_block: {
      const double pad = kind.strong_convexity_pad;
      if (pad < 0.0) throw config_error("exact-block surrogate: pad must be nonnegative");
      s.anchor_value = p.smooth_eval(anchor_x);
      s.anchor_gradient = full_gradient ? full_gradient->segment(off, ni).eval()
                                        : eval_block_gradient(p, i, anchor_x);
      s.strong_convexity =
          pad > 0.0 ? pad : detail::estimate_block_strong_convexity(p, i, anchor_x);
      const Vec anchor = s.anchor_block;
      // Evaluations embed the block variable into a copy of the anchor; the
      // problem reference must outlive the surrogate.
      auto embed = [anchor_x, off, ni](const Vec& z) {
        Vec x = anchor_x;
        x.segment(off, ni) = z;
        return x;
      };
      s.value_eval = [&p, embed, pad, anchor](const Vec& z) {
        const double v = p.smooth_eval(embed(z));
        return pad > 0.0 ? v + 0.5 * pad * (z - anchor).squaredNorm() : v;
      };
      s.grad_eval = [&p, embed, pad, anchor, off, ni](const Vec& z) -> Vec {
        Vec g = p.gradient_eval(embed(z)).segment(off, ni);
        if (pad > 0.0) g += pad * (z - anchor);
        return g;
      };
      break;
    }
  }
  return s;
}

}  // namespace hyflexa
