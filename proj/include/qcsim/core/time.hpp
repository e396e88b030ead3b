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

/**
 * @file time.hpp
 * @brief Exact integer time base shared by every simulated component.
 *
 * The global tick runs at 82.5 GHz. That rate is the least common multiple of
 * the 500 MHz control clock, the 161.1328125 MHz link user clock, the
 * 10.3125 Gb/s line bit rate and the 10 MHz reference, so each of those
 * periods is a whole number of ticks:
 *
 *   clock                 period (ticks)
 *   -------------------   --------------
 *   500 MHz control       165
 *   161.1328125 MHz user  512
 *   10.3125 Gb/s bit      8
 *   10 MHz reference      8250
 *
 * No floating point is used for time anywhere in the simulator; durations that
 * do not land on a whole tick are rejected instead of rounded.
 */

#pragma once

#include <boost/rational.hpp>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace qcsim {

using Rational = boost::rational<std::int64_t>;

inline constexpr std::int64_t kBaseTickHz = 82'500'000'000;

/// A point or span on the global time base, in whole ticks.
struct SimTime {
  std::uint64_t ticks = 0;

  constexpr auto operator<=>(const SimTime&) const = default;

  friend constexpr SimTime operator+(SimTime a, SimTime b) { return {a.ticks + b.ticks}; }
  friend constexpr SimTime operator-(SimTime a, SimTime b) { return {a.ticks - b.ticks}; }
  friend constexpr SimTime operator*(SimTime a, std::uint64_t k) { return {a.ticks * k}; }
  constexpr SimTime& operator+=(SimTime o) {
    ticks += o.ticks;
    return *this;
  }

  /// Nanoseconds as a double, for display only.
  double ns() const { return static_cast<double>(ticks) / 82.5; }
};

struct Frequency {
  Rational hz{0};

  friend bool operator==(const Frequency&, const Frequency&) = default;

  /// One period of this clock; throws if it is not a whole number of ticks.
  SimTime period() const;
};

enum class TimeUnit { Picoseconds, Nanoseconds, Microseconds, Milliseconds, Seconds, Cycles };

struct Duration {
  Rational value{0};
  TimeUnit unit = TimeUnit::Nanoseconds;
  Frequency clock{};  // only meaningful for TimeUnit::Cycles

  static Duration ps(Rational v) { return {v, TimeUnit::Picoseconds, {}}; }
  static Duration ns(Rational v) { return {v, TimeUnit::Nanoseconds, {}}; }
  static Duration us(Rational v) { return {v, TimeUnit::Microseconds, {}}; }
  static Duration ms(Rational v) { return {v, TimeUnit::Milliseconds, {}}; }
  static Duration s(Rational v) { return {v, TimeUnit::Seconds, {}}; }
  static Duration cycles(Rational n, Frequency f) { return {n, TimeUnit::Cycles, f}; }
};

/// Exact conversion to ticks. Throws NonRepresentableDuration for negative
/// values and for anything that is not a whole number of ticks.
SimTime ticks_of(const Duration& d);

/// Parses a plain decimal literal ("-0.5775", "161.1328125") exactly.
Rational parse_decimal(std::string_view text);

/// Parses "<decimal><unit>" where unit is ps, ns, us, ms or s, or
/// "<decimal>cycles@<frequency>". Throws std::invalid_argument on malformed
/// text and NonRepresentableDuration on off-grid values.
Duration parse_duration(std::string_view text);

/// "500MHz", "5.5GHz", "10.3125GHz", "125kHz", "1Hz".
Frequency parse_frequency(std::string_view text);

/// Shorthand for ticks_of(parse_duration(text)).
SimTime parse_time(std::string_view text);

/// Rounded decimal rendering of a rational, trailing zeros trimmed.
std::string to_decimal(Rational r, int max_places = 6);

/// Tick count rendered as nanoseconds, e.g. 2640 -> "32", 512 -> "6.206061".
std::string format_ns(SimTime t, int max_places = 6);

}  // namespace qcsim
