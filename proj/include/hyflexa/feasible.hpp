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

#include <Eigen/Core>

#include "hyflexa/errors.hpp"

namespace hyflexa {

using Vec = Eigen::VectorXd;

/// Per-block feasible set: the whole space or an axis-aligned box.
struct FeasibleBlock {
  enum class Kind { unconstrained, box };

  Kind kind = Kind::unconstrained;
  int dim = 0;
  Vec lower;  // box only
  Vec upper;  // box only

  static FeasibleBlock unconstrained(int dim) {
    FeasibleBlock f;
    f.kind = Kind::unconstrained;
    f.dim = dim;
    return f;
  }

  static FeasibleBlock box(Vec lo, Vec up) {
    if (lo.size() != up.size()) throw config_error("box bounds size mismatch");
    if ((lo.array() > up.array()).any()) throw config_error("box has lower > upper");
    FeasibleBlock f;
    f.kind = Kind::box;
    f.dim = static_cast<int>(lo.size());
    f.lower = std::move(lo);
    f.upper = std::move(up);
    return f;
  }
};

/// Euclidean projection onto the block set. Idempotent.
inline Vec project_block(const FeasibleBlock& feasible, const Vec& z) {
  if (static_cast<int>(z.size()) != feasible.dim)
    throw std::invalid_argument("project_block: dimension mismatch");
  if (feasible.kind == FeasibleBlock::Kind::unconstrained) return z;
  return z.cwiseMax(feasible.lower).cwiseMin(feasible.upper);
}

inline bool block_contains(const FeasibleBlock& feasible, const Vec& z) {
  if (feasible.kind == FeasibleBlock::Kind::unconstrained) return true;
  return (z.array() >= feasible.lower.array()).all() &&
         (z.array() <= feasible.upper.array()).all();
}

}  // namespace hyflexa
