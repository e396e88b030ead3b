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
#include "qcsim/core/error.hpp"
#include "qcsim/core/time.hpp"

#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include <random>

using namespace qcsim;

TEST(ticks_of, examples) {
  EXPECT_EQ(ticks_of(Duration::ns(Rational{32})).ticks, 2640u);
  EXPECT_EQ(ticks_of(Duration::cycles(Rational{1}, kControlClock)).ticks, 165u);
  EXPECT_EQ(ticks_of(Duration::us(Rational{1})).ticks, 82500u);
  EXPECT_EQ(ticks_of(Duration::cycles(Rational{1}, kUserClock)).ticks, 512u);
}

TEST(ticks_of, modeled_periods) {
  EXPECT_EQ(kControlClock.period().ticks, 165u);
  EXPECT_EQ(kUserClock.period().ticks, 512u);
  EXPECT_EQ(kReferenceClock.period().ticks, 8250u);
  EXPECT_EQ(parse_frequency("10.3125GHz").period().ticks, 8u);
}

TEST(ticks_of, rejects_off_grid_and_negative) {
  EXPECT_THROW(ticks_of(Duration::ps(Rational{7})), NonRepresentableDuration);
  EXPECT_THROW(ticks_of(Duration::ns(Rational{-1})), NonRepresentableDuration);
  // 156.25 MHz reference clock: 528 ticks, fine; 125 MHz: 660 ticks.
  EXPECT_EQ(parse_frequency("156.25MHz").period().ticks, 528u);
  EXPECT_EQ(parse_frequency("125MHz").period().ticks, 660u);
  // 3 GHz is not a divisor of 82.5 GHz.
  EXPECT_THROW(parse_frequency("3GHz").period(), NonRepresentableDuration);
}

TEST(ticks_of, round_trips_every_modeled_clock) {
  const Frequency clocks[] = {kControlClock, kUserClock, kReferenceClock, parse_frequency("10.3125GHz")};
  std::mt19937_64 rng(7);
  for (const Frequency& f : clocks) {
    const SimTime period = f.period();
    for (int i = 0; i < 1000; ++i) {
      const auto n = static_cast<std::int64_t>(rng() % 1'000'000'000);
      const SimTime t = ticks_of(Duration::cycles(Rational{n}, f));
      EXPECT_EQ(t.ticks, static_cast<std::uint64_t>(n) * period.ticks);
      // Back through nanoseconds: n periods expressed as an exact ns rational.
      const Rational ns{static_cast<std::int64_t>(t.ticks) * 2, 165};
      EXPECT_EQ(ticks_of(Duration::ns(ns)), t);
    }
  }
}

TEST(parse_duration, units_and_errors) {
  EXPECT_EQ(parse_time("32ns").ticks, 2640u);
  EXPECT_EQ(parse_time("1us").ticks, 82500u);
  EXPECT_EQ(parse_time("0.5us").ticks, 41250u);
  EXPECT_EQ(parse_time("3cycles@500MHz").ticks, 495u);
  EXPECT_EQ(parse_time("1ms").ticks, 82'500'000u);
  EXPECT_THROW(parse_time("7ps"), NonRepresentableDuration);
  EXPECT_THROW(parse_time("12"), std::invalid_argument);
  EXPECT_THROW(parse_time("ns"), std::invalid_argument);
  EXPECT_THROW(parse_time("1.2.3ns"), std::invalid_argument);
  EXPECT_THROW(parse_time("5weeks"), std::invalid_argument);
}

TEST(parse_decimal, exact) {
  EXPECT_EQ(parse_decimal("161.1328125"), Rational(1611328125, 10000000));
  EXPECT_EQ(parse_decimal("-0.5"), Rational(-1, 2));
  EXPECT_EQ(parse_decimal("+100"), Rational(100));
}

TEST(format_ns, renders_exactly) {
  EXPECT_EQ(format_ns(SimTime{2640}), "32");
  EXPECT_EQ(format_ns(SimTime{82500}), "1000");
  EXPECT_EQ(format_ns(SimTime{512}), "6.206061");
  EXPECT_EQ(to_decimal(Rational{1, 33} * 100, 4), "3.0303");
}

// ---------------------------------------------------------------- ClockDomain

TEST(counter_at, examples) {
  ClockDomain clk(kControlClock);
  EXPECT_EQ(counter_at(clk, SimTime{1650}), 10);
  clk.set_counter_correction(-3);
  EXPECT_EQ(counter_at(clk, SimTime{1650}), 7);
}

TEST(counter_at, n_periods_reads_n) {
  ClockDomain clk(kUserClock);
  for (std::uint64_t n : {0ull, 1ull, 2ull, 1000ull, 123456789ull}) {
    EXPECT_EQ(clk.counter_at(SimTime{n * 512}), static_cast<std::int64_t>(n));
    if (n) {
      EXPECT_EQ(clk.counter_at(SimTime{n * 512 - 1}), static_cast<std::int64_t>(n) - 1);
    }
  }
}

namespace {

using BigRational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// floor((t * (1 + ppm * 1e-6) - phase) / period) + correction, in arbitrary precision.
std::int64_t oracle_counter(std::uint64_t t, std::int64_t ppm_num, std::int64_t ppm_den, std::uint64_t phase,
                            std::uint64_t period, std::int64_t correction) {
  BigRational drift = BigRational(BigInt(ppm_num), BigInt(ppm_den)) / 1'000'000;
  BigRational eff = BigRational(BigInt(t)) * (1 + drift) - BigRational(BigInt(phase));
  BigRational cycles = eff / BigRational(BigInt(period));
  BigInt n = boost::multiprecision::numerator(cycles);
  BigInt d = boost::multiprecision::denominator(cycles);
  BigInt q = n / d;
  if (n % d != 0 && n < 0) q -= 1;
  return static_cast<std::int64_t>(q) + correction;
}

}  // namespace

TEST(counter_at, drift_matches_rational_oracle) {
  ClockDomain clk(kControlClock, SimTime{}, Rational{100});
  const std::int64_t expected = oracle_counter(1'000'000'000, 100, 1, 0, 165, 0);
  EXPECT_EQ(expected, 6'061'212);  // floor(1.0001e9 / 165)
  EXPECT_EQ(clk.counter_at(SimTime{1'000'000'000}), expected);
}

TEST(counter_at, random_clocks_match_oracle) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const std::int64_t ppm_num = static_cast<std::int64_t>(rng() % 4001) - 2000;
    const std::int64_t ppm_den = static_cast<std::int64_t>(rng() % 7) + 1;
    const std::uint64_t phase = rng() % 100'000;
    const std::int64_t corr = static_cast<std::int64_t>(rng() % 2'000'001) - 1'000'000;
    const std::uint64_t t = rng() % 1'000'000'000'000ull;
    const bool user = rng() & 1;
    ClockDomain clk(user ? kUserClock : kControlClock, SimTime{phase}, Rational{ppm_num, ppm_den}, corr);
    EXPECT_EQ(clk.counter_at(SimTime{t}), oracle_counter(t, ppm_num, ppm_den, phase, user ? 512 : 165, corr));
  }
}

TEST(counter_at, time_of_count_is_first_tick_reaching_value) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    const std::int64_t ppm = static_cast<std::int64_t>(rng() % 2001) - 1000;
    const std::int64_t corr = static_cast<std::int64_t>(rng() % 2001) - 1000;
    ClockDomain clk(kControlClock, SimTime{rng() % 1000}, Rational{ppm, 3}, corr);
    const std::int64_t target = clk.counter_at(SimTime{}) + static_cast<std::int64_t>(rng() % 10'000'000) + 1;
    const SimTime t = clk.time_of_count(target);
    EXPECT_GE(clk.counter_at(t), target);
    ASSERT_GT(t.ticks, 0u);
    EXPECT_LT(clk.counter_at(SimTime{t.ticks - 1}), target);
    EXPECT_EQ(clk.next_edge(t), t);
    EXPECT_EQ(clk.next_edge(SimTime{t.ticks - 1}).ticks <= t.ticks, true);
  }
}
