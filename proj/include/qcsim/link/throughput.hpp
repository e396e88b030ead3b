/*
 * Copyright 2026 The qcsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "qcsim/link/lane.hpp"

#include <string>

namespace qcsim::link {

/// Exact payload-rate figures for one lane direction, all in bits/s.
struct Throughput {
  Rational line_rate;
  Rational encoding_factor;      // data share left by the pause schedule, (P-1)/P
  Rational encoding_overhead;    // 1 - encoding_factor
  Rational payload_ceiling;      // line_rate * encoding_factor
  Rational compensation_fraction;  // comp_length / comp_period
  Rational with_compensation;    // payload_ceiling * (1 - compensation_fraction)
  // Measured from the cycle schedule itself: data cycles per cycle over one
  // full joint period (pauses and compensation cycles can coincide).
  Rational scheduled_density;
  Rational scheduled_payload;  // user_clock * 64 * scheduled_density
};

Throughput effective_throughput(const LaneConfig& config, const LaneSchedule& schedule);

/// Human-readable efficiency table.
std::string format_throughput(const Throughput& t);

}  // namespace qcsim::link
