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
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "hyflexa/errors.hpp"
#include "hyflexa/rng.hpp"

namespace hyflexa {

/// Random block-selection laws. Every rule gives each block a strictly
/// positive inclusion probability, so the selection is proper.
struct SamplingRule {
  enum class Kind {
    uniform,          // independent Bernoulli(E|S|/N) per block, empty draws rejected
    doubly_uniform,   // draw |S| from a pmf, then a uniform subset of that size
    nonoverlapping,   // one part of a fixed partition of the blocks, uniformly
    nice,             // uniform over all subsets of exactly tau blocks
    sequential,       // single block, uniform
    fully_parallel    // all blocks
  };

  Kind kind = Kind::fully_parallel;
  int n_blocks = 0;
  double expected_size = 1.0;                // uniform
  std::vector<double> cardinality_pmf;       // doubly_uniform: pmf[j-1] = P(|S| = j)
  std::vector<std::vector<int>> parts;       // nonoverlapping
  int tau = 1;                               // nice

  static SamplingRule uniform(int n, double expected_size) {
    SamplingRule r;
    r.kind = Kind::uniform;
    r.n_blocks = n;
    r.expected_size = expected_size;
    r.validate();
    return r;
  }

  static SamplingRule doubly_uniform(int n, std::vector<double> pmf) {
    SamplingRule r;
    r.kind = Kind::doubly_uniform;
    r.n_blocks = n;
    r.cardinality_pmf = std::move(pmf);
    r.validate();
    return r;
  }

  static SamplingRule nonoverlapping(int n, std::vector<std::vector<int>> parts) {
    SamplingRule r;
    r.kind = Kind::nonoverlapping;
    r.n_blocks = n;
    r.parts = std::move(parts);
    for (auto& part : r.parts) std::sort(part.begin(), part.end());
    r.validate();
    return r;
  }

  /// Contiguous near-equal parts, a convenience for CLI use.
  static SamplingRule nonoverlapping_contiguous(int n, int n_parts) {
    if (n_parts < 1 || n_parts > n)
      throw config_error("nonoverlapping sampling: partition count must be in [1, N]");
    std::vector<std::vector<int>> parts(static_cast<std::size_t>(n_parts));
    for (int p = 0; p < n_parts; ++p) {
      const int lo = static_cast<int>(static_cast<long long>(n) * p / n_parts);
      const int hi = static_cast<int>(static_cast<long long>(n) * (p + 1) / n_parts);
      for (int i = lo; i < hi; ++i) parts[static_cast<std::size_t>(p)].push_back(i);
    }
    return nonoverlapping(n, std::move(parts));
  }

  static SamplingRule nice(int n, int tau) {
    SamplingRule r;
    r.kind = Kind::nice;
    r.n_blocks = n;
    r.tau = tau;
    r.validate();
    return r;
  }

  static SamplingRule sequential(int n) {
    SamplingRule r;
    r.kind = Kind::sequential;
    r.n_blocks = n;
    r.validate();
    return r;
  }

  static SamplingRule fully_parallel(int n) {
    SamplingRule r;
    r.kind = Kind::fully_parallel;
    r.n_blocks = n;
    r.validate();
    return r;
  }

  void validate() const {
    if (n_blocks < 1) throw config_error("sampling rule: N must be >= 1");
    switch (kind) {
      case Kind::uniform:
        if (!(expected_size > 0.0 && expected_size <= static_cast<double>(n_blocks)))
          throw config_error("uniform sampling: expected size must be in (0, N]");
        break;
      case Kind::doubly_uniform: {
        if (static_cast<int>(cardinality_pmf.size()) != n_blocks)
          throw config_error("doubly uniform sampling: pmf must have N entries (|S| = 1..N)");
        double sum = 0.0;
        for (double q : cardinality_pmf) {
          if (q < 0.0) throw config_error("doubly uniform sampling: negative pmf entry");
          sum += q;
        }
        if (std::abs(sum - 1.0) > 1e-9)
          throw config_error("doubly uniform sampling: pmf must sum to 1");
        break;
      }
      case Kind::nonoverlapping: {
        std::vector<char> seen(static_cast<std::size_t>(n_blocks), 0);
        for (const auto& part : parts) {
          if (part.empty()) throw config_error("nonoverlapping sampling: empty part");
          for (int i : part) {
            if (i < 0 || i >= n_blocks)
              throw config_error("nonoverlapping sampling: index out of range");
            if (seen[static_cast<std::size_t>(i)])
              throw config_error("nonoverlapping sampling: parts overlap");
            seen[static_cast<std::size_t>(i)] = 1;
          }
        }
        for (char s : seen)
          if (!s) throw config_error("nonoverlapping sampling: parts do not cover all blocks");
        break;
      }
      case Kind::nice:
        if (tau < 1 || tau > n_blocks)
          throw config_error("nice sampling: tau must be in [1, N]");
        break;
      case Kind::sequential:
      case Kind::fully_parallel:
        break;
    }
  }
};

namespace detail {

/// Uniformly random j-subset of {0..n-1} by partial Fisher-Yates, sorted.
inline std::vector<int> random_subset(int n, int j, SplitMix64& rng) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  for (int t = 0; t < j; ++t) {
    const int swap_with = t + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - t)));
    std::swap(perm[static_cast<std::size_t>(t)], perm[static_cast<std::size_t>(swap_with)]);
  }
  std::vector<int> out(perm.begin(), perm.begin() + j);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Draw one block set S. The result is nonempty and sorted ascending;
/// identical seeds give identical draw sequences.
inline std::vector<int> draw(const SamplingRule& rule, SplitMix64& rng) {
  const int n = rule.n_blocks;
  switch (rule.kind) {
    case SamplingRule::Kind::uniform: {
      const double p = rule.expected_size / static_cast<double>(n);
      std::vector<int> out;
      for (;;) {
        out.clear();
        for (int i = 0; i < n; ++i) {
          if (rng.next_double() < p) out.push_back(i);
        }
        if (!out.empty()) return out;
      }
    }
    case SamplingRule::Kind::doubly_uniform: {
      const double u = rng.next_double();
      double acc = 0.0;
      int j = n;
      for (int c = 1; c <= n; ++c) {
        acc += rule.cardinality_pmf[static_cast<std::size_t>(c - 1)];
        if (u < acc) {
          j = c;
          break;
        }
      }
      return detail::random_subset(n, j, rng);
    }
    case SamplingRule::Kind::nonoverlapping: {
      const auto pick = rng.next_below(rule.parts.size());
      return rule.parts[static_cast<std::size_t>(pick)];
    }
    case SamplingRule::Kind::nice:
      return detail::random_subset(n, rule.tau, rng);
    case SamplingRule::Kind::sequential:
      return {static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)))};
    case SamplingRule::Kind::fully_parallel: {
      std::vector<int> out(static_cast<std::size_t>(n));
      std::iota(out.begin(), out.end(), 0);
      return out;
    }
  }
  throw config_error("draw: unknown sampling kind");
}

/// Per-block inclusion probability under the rule's law.
///
/// For uniform sampling this returns E|S|/N, the identity that defines the
/// rule; the empty-draw rejection inflates the true probability by a factor
/// 1/(1-(1-p)^N), negligible except at very small N and measured by the
/// frequency tests rather than folded in here.
inline double inclusion_probability(const SamplingRule& rule, int i) {
  if (i < 0 || i >= rule.n_blocks)
    throw std::invalid_argument("inclusion_probability: block index out of range");
  const double n = static_cast<double>(rule.n_blocks);
  switch (rule.kind) {
    case SamplingRule::Kind::uniform:
      return rule.expected_size / n;
    case SamplingRule::Kind::doubly_uniform: {
      double p = 0.0;
      for (int j = 1; j <= rule.n_blocks; ++j)
        p += rule.cardinality_pmf[static_cast<std::size_t>(j - 1)] * (static_cast<double>(j) / n);
      return p;
    }
    case SamplingRule::Kind::nonoverlapping:
      // Each of the P parts is equally likely and each block lives in
      // exactly one part.
      return 1.0 / static_cast<double>(rule.parts.size());
    case SamplingRule::Kind::nice:
      return static_cast<double>(rule.tau) / n;
    case SamplingRule::Kind::sequential:
      return 1.0 / n;
    case SamplingRule::Kind::fully_parallel:
      return 1.0;
  }
  throw config_error("inclusion_probability: unknown sampling kind");
}

/// Greedy subselection policy applied inside a sampled set.
struct GreedyPolicy {
  enum class Mode {
    threshold,    // keep every i with E_i >= sigma * max E
    minimal_rho   // keep only the argmax (smallest set meeting the rho rule)
  };

  Mode mode = Mode::threshold;
  double sigma = 0.0;  // [0, 1]
  double rho = 1.0;    // (0, 1]

  static GreedyPolicy threshold(double sigma) {
    if (!(sigma >= 0.0 && sigma <= 1.0))
      throw config_error("greedy threshold: sigma must be in [0,1]");
    GreedyPolicy g;
    g.mode = Mode::threshold;
    g.sigma = sigma;
    return g;
  }

  static GreedyPolicy minimal_rho(double rho) {
    if (!(rho > 0.0 && rho <= 1.0))
      throw config_error("greedy minimal-rho: rho must be in (0,1]");
    GreedyPolicy g;
    g.mode = Mode::minimal_rho;
    g.rho = rho;
    return g;
  }
};

/// Keep the "promising" blocks of S according to the policy. S must be
/// nonempty; the argmax always qualifies, so the result is nonempty.
/// Ties break toward the lowest block index.
inline std::vector<int> greedy_subselect(const std::vector<int>& S,
                                         const std::function<double(int)>& E,
                                         const GreedyPolicy& policy) {
  if (S.empty()) throw std::invalid_argument("greedy_subselect: empty sampled set");
  double m = -1.0;
  int argmax = S.front();
  for (int i : S) {
    const double e = E(i);
    if (e > m) {
      m = e;
      argmax = i;
    }
  }
  if (policy.mode == GreedyPolicy::Mode::minimal_rho) return {argmax};
  std::vector<int> out;
  const double cut = policy.sigma * m;
  for (int i : S) {
    if (E(i) >= cut) out.push_back(i);
  }
  return out;
}

}  // namespace hyflexa
