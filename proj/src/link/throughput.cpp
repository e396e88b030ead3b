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

#include "qcsim/link/throughput.hpp"

#include <fmt/format.h>

#include <numeric>

namespace qcsim::link {
namespace {

std::string gbps(const Rational& bps) { return to_decimal(bps / 1'000'000'000, 6) + " Gb/s"; }
std::string percent(const Rational& f) { return to_decimal(f * 100, 4) + " %"; }

}  // namespace

Throughput effective_throughput(const LaneConfig& config, const LaneSchedule& schedule) {
  Throughput t;
  t.line_rate = config.line_rate_bps;
  t.encoding_factor = schedule.pause_period
                          ? Rational{static_cast<std::int64_t>(schedule.pause_period - 1),
                                     static_cast<std::int64_t>(schedule.pause_period)}
                          : Rational{1};
  t.encoding_overhead = Rational{1} - t.encoding_factor;
  t.payload_ceiling = t.line_rate * t.encoding_factor;
  t.compensation_fraction = schedule.comp_period
                                ? Rational{static_cast<std::int64_t>(schedule.comp_length),
                                           static_cast<std::int64_t>(schedule.comp_period)}
                                : Rational{0};
  t.with_compensation = t.payload_ceiling * (Rational{1} - t.compensation_fraction);

  std::uint64_t window = 1;
  if (schedule.pause_period) window = std::lcm(window, schedule.pause_period);
  if (schedule.comp_period) window = std::lcm(window, schedule.comp_period);
  t.scheduled_density = Rational{static_cast<std::int64_t>(schedule.count_data_cycles(0, window)),
                                 static_cast<std::int64_t>(window)};
  t.scheduled_payload = config.user_clock().hz * 64 * t.scheduled_density;
  return t;
}

std::string format_throughput(const Throughput& t) {
  std::string out;
  out += fmt::format("{:<36}{}\n", "line rate", gbps(t.line_rate));
  out += fmt::format("{:<36}{} ({}/{})\n", "encoding overhead", percent(t.encoding_overhead),
                     t.encoding_overhead.numerator(), t.encoding_overhead.denominator());
  out += fmt::format("{:<36}{}\n", "payload ceiling", gbps(t.payload_ceiling));
  out += fmt::format("{:<36}{} ({}/{})\n", "clock compensation share", percent(t.compensation_fraction),
                     t.compensation_fraction.numerator(), t.compensation_fraction.denominator());
  out += fmt::format("{:<36}{}\n", "payload with compensation", gbps(t.with_compensation));
  out += fmt::format("{:<36}{} ({}/{})\n", "scheduled data-cycle density", percent(t.scheduled_density),
                     t.scheduled_density.numerator(), t.scheduled_density.denominator());
  out += fmt::format("{:<36}{}\n", "scheduled payload rate", gbps(t.scheduled_payload));
  return out;
}

}  // namespace qcsim::link
