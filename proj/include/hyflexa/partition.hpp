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

#include <numeric>
#include <vector>

#include "hyflexa/errors.hpp"

namespace hyflexa {

/// Partition of n coordinates into N contiguous blocks.
class BlockPartition {
 public:
  BlockPartition() = default;

  static BlockPartition from_sizes(std::vector<int> sizes) {
    BlockPartition p;
    if (sizes.empty()) throw config_error("block partition needs at least one block");
    p.sizes_ = std::move(sizes);
    p.offsets_.resize(p.sizes_.size() + 1, 0);
    for (std::size_t i = 0; i < p.sizes_.size(); ++i) {
      if (p.sizes_[i] < 1) throw config_error("block sizes must be >= 1");
      p.offsets_[i + 1] = p.offsets_[i] + p.sizes_[i];
    }
    return p;
  }

  /// n scalar blocks.
  static BlockPartition scalar(int n) {
    return from_sizes(std::vector<int>(static_cast<std::size_t>(n), 1));
  }

  int n_blocks() const { return static_cast<int>(sizes_.size()); }
  int total_dim() const { return offsets_.back(); }
  int size(int i) const { return sizes_[check(i)]; }
  int offset(int i) const { return offsets_[check(i)]; }
  const std::vector<int>& sizes() const { return sizes_; }
  const std::vector<int>& offsets() const { return offsets_; }

 private:
  int check(int i) const {
    if (i < 0 || i >= n_blocks()) throw std::invalid_argument("block index out of range");
    return i;
  }
  std::vector<int> sizes_;
  std::vector<int> offsets_{0};
};

}  // namespace hyflexa
