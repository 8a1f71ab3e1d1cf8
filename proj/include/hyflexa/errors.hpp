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

#include <stdexcept>
#include <string>

namespace hyflexa {

/// Invalid configuration (parameter out of range, unsupported combination).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Non-finite values, degenerate subproblems, indefinite matrices.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// An iterative procedure hit its iteration cap before reaching the
/// requested accuracy. Carries the best accuracy achieved.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& msg, double achieved)
      : std::runtime_error(msg), achieved_accuracy(achieved) {}
  double achieved_accuracy;
};

}  // namespace hyflexa
