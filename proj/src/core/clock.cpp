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

#include "qcsim/core/clock.hpp"

#include <stdexcept>

namespace qcsim {
namespace {

__extension__ using i128 = __int128;

constexpr std::int64_t kPpm = 1'000'000;

i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

i128 ceil_div(i128 a, i128 b) { return -floor_div(-a, b); }

}  // namespace

ClockDomain::ClockDomain(Frequency nominal, SimTime phase_offset, Rational drift_ppm,
                         std::int64_t counter_correction)
    : nominal_(nominal), phase_offset_(phase_offset), drift_ppm_(drift_ppm), correction_(counter_correction) {
  if (nominal_.hz <= 0) throw std::invalid_argument("ClockDomain: frequency must be positive");
  if (drift_ppm_ <= -kPpm) throw std::invalid_argument("ClockDomain: drift must exceed -1e6 ppm");
}

// With drift p/q ppm and frequency fn/fd:
//   cycles(t) = (t * (M q + p) - phase * M q) * fn / (M q * fd * base)
std::int64_t ClockDomain::counter_at(SimTime t) const {
  const i128 p = drift_ppm_.numerator();
  const i128 q = drift_ppm_.denominator();
  const i128 mq = static_cast<i128>(kPpm) * q;
  const Rational f_over_base = nominal_.hz / kBaseTickHz;
  const i128 num = (static_cast<i128>(t.ticks) * (mq + p) - static_cast<i128>(phase_offset_.ticks) * mq) *
                   f_over_base.numerator();
  const i128 den = mq * f_over_base.denominator();
  return static_cast<std::int64_t>(floor_div(num, den)) + correction_;
}

SimTime ClockDomain::time_of_count(std::int64_t value) const {
  const i128 p = drift_ppm_.numerator();
  const i128 q = drift_ppm_.denominator();
  const i128 mq = static_cast<i128>(kPpm) * q;
  const Rational f_over_base = nominal_.hz / kBaseTickHz;
  const i128 k = static_cast<i128>(value) - correction_;
  // Smallest integer t with (t (Mq+p) - phase Mq) fn >= k Mq fd.
  const i128 num = k * mq * f_over_base.denominator() +
                   static_cast<i128>(phase_offset_.ticks) * mq * f_over_base.numerator();
  const i128 den = f_over_base.numerator() * (mq + p);
  i128 t = ceil_div(num, den);
  if (t < 0) t = 0;
  return SimTime{static_cast<std::uint64_t>(t)};
}

SimTime ClockDomain::next_edge(SimTime t) const {
  std::int64_t c = counter_at(t);
  SimTime edge = time_of_count(c);
  if (edge == t) return t;
  return time_of_count(c + 1);
}

}  // namespace qcsim
