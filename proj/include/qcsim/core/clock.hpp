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

#include "qcsim/core/time.hpp"

#include <cstdint>

namespace qcsim {

/**
 * A free-running board clock and the cycle counter derived from it.
 *
 *   counter(t) = floor((t * (1 + drift) - phase_offset) / period) + correction
 *
 * with drift in parts per million. The counter is signed: a board that has
 * just booted may carry a large negative correction until it is synchronized.
 */
class ClockDomain {
 public:
  ClockDomain() = default;
  explicit ClockDomain(Frequency nominal, SimTime phase_offset = {}, Rational drift_ppm = Rational{0},
                       std::int64_t counter_correction = 0);

  const Frequency& nominal_frequency() const { return nominal_; }
  SimTime phase_offset() const { return phase_offset_; }
  const Rational& drift_ppm() const { return drift_ppm_; }
  std::int64_t counter_correction() const { return correction_; }

  void set_counter_correction(std::int64_t c) { correction_ = c; }
  void adjust_counter_correction(std::int64_t delta) { correction_ += delta; }

  std::int64_t counter_at(SimTime t) const;

  /// Earliest tick at which the counter reads at least `value`. Clamped to 0
  /// for values the counter already exceeded at boot.
  SimTime time_of_count(std::int64_t value) const;

  /// Earliest counter edge at or after t.
  SimTime next_edge(SimTime t) const;

 private:
  Frequency nominal_{Rational{500'000'000}};
  SimTime phase_offset_{};
  Rational drift_ppm_{0};
  std::int64_t correction_ = 0;
};

inline std::int64_t counter_at(const ClockDomain& clock, SimTime t) { return clock.counter_at(t); }

inline const Frequency kControlClock{Rational{500'000'000}};
inline const Frequency kUserClock{Rational{322'265'625, 2}};  // 161.1328125 MHz
inline const Frequency kReferenceClock{Rational{10'000'000}};

}  // namespace qcsim
