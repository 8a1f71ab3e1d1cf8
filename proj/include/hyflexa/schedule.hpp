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

#include "hyflexa/errors.hpp"

namespace hyflexa {

/// One step of the diminishing recursion gamma <- gamma * (1 - theta*gamma).
/// For gamma in (0,1] and theta in (0,1) the result stays in (0, gamma):
/// the sequence is nonsummable but square-summable.
inline double step_size_next(double gamma_prev, double theta) {
  if (!(gamma_prev > 0.0 && gamma_prev <= 1.0))
    throw config_error("step_size_next: gamma must be in (0,1]");
  if (!(theta > 0.0 && theta < 1.0))
    throw config_error("step_size_next: theta must be in (0,1)");
  return gamma_prev * (1.0 - theta * gamma_prev);
}

struct StepSizeSchedule {
  enum class Kind { diminishing, constant };

  Kind kind = Kind::diminishing;
  double gamma0 = 1.0;   // diminishing
  double theta = 1e-2;   // diminishing
  double constant = 0.1; // constant

  static StepSizeSchedule diminishing(double gamma0, double theta) {
    StepSizeSchedule s;
    s.kind = Kind::diminishing;
    s.gamma0 = gamma0;
    s.theta = theta;
    s.validate();
    return s;
  }

  static StepSizeSchedule constant_step(double gamma) {
    StepSizeSchedule s;
    s.kind = Kind::constant;
    s.constant = gamma;
    s.validate();
    return s;
  }

  void validate() const {
    if (kind == Kind::diminishing) {
      if (!(gamma0 > 0.0 && gamma0 <= 1.0))
        throw config_error("diminishing schedule: gamma0 must be in (0,1]");
      if (!(theta > 0.0 && theta < 1.0))
        throw config_error("diminishing schedule: theta must be in (0,1)");
    } else {
      if (!(constant > 0.0 && constant <= 1.0))
        throw config_error("constant schedule: gamma must be in (0,1]");
    }
  }

  double initial() const {
    return kind == Kind::diminishing ? gamma0 : constant;
  }

  double next(double gamma) const {
    return kind == Kind::diminishing ? step_size_next(gamma, theta) : gamma;
  }
};

}  // namespace hyflexa
