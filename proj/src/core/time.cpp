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

#include "qcsim/core/time.hpp"

#include "qcsim/core/error.hpp"

#include <fmt/format.h>

#include <cctype>
#include <limits>
#include <stdexcept>
#include <utility>

namespace qcsim {
namespace {

__extension__ using i128 = __int128;

// Seconds per unit as num/den.
std::pair<i128, i128> unit_scale(TimeUnit u) {
  switch (u) {
    case TimeUnit::Picoseconds: return {1, 1'000'000'000'000};
    case TimeUnit::Nanoseconds: return {1, 1'000'000'000};
    case TimeUnit::Microseconds: return {1, 1'000'000};
    case TimeUnit::Milliseconds: return {1, 1'000};
    case TimeUnit::Seconds: return {1, 1};
    case TimeUnit::Cycles: break;
  }
  throw std::logic_error("unit_scale: cycles have no fixed scale");
}

std::string render(const Duration& d) {
  std::string v = to_decimal(d.value, 12);
  switch (d.unit) {
    case TimeUnit::Picoseconds: return v + "ps";
    case TimeUnit::Nanoseconds: return v + "ns";
    case TimeUnit::Microseconds: return v + "us";
    case TimeUnit::Milliseconds: return v + "ms";
    case TimeUnit::Seconds: return v + "s";
    case TimeUnit::Cycles: return v + " cycles @ " + to_decimal(d.clock.hz, 12) + " Hz";
  }
  return v;
}

bool starts_with_digit_or_sign(std::string_view s) {
  return !s.empty() && (std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '-' ||
                        s[0] == '+' || s[0] == '.');
}

// Length of the leading decimal literal in s.
std::size_t decimal_prefix(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) ++i;
  return i;
}

}  // namespace

SimTime Frequency::period() const { return ticks_of(Duration::cycles(Rational{1}, *this)); }

SimTime ticks_of(const Duration& d) {
  i128 num = 0;
  i128 den = 0;
  if (d.unit == TimeUnit::Cycles) {
    if (d.clock.hz <= 0) throw std::invalid_argument("ticks_of: clock frequency must be positive");
    // cycles * base / f
    num = static_cast<i128>(d.value.numerator()) * kBaseTickHz * d.clock.hz.denominator();
    den = static_cast<i128>(d.value.denominator()) * d.clock.hz.numerator();
  } else {
    auto [sn, sd] = unit_scale(d.unit);
    num = static_cast<i128>(d.value.numerator()) * kBaseTickHz * sn;
    den = static_cast<i128>(d.value.denominator()) * sd;
  }
  if (num < 0) throw NonRepresentableDuration("negative duration: " + render(d));
  if (num % den != 0) {
    throw NonRepresentableDuration(render(d) + " is not a whole number of 1/82.5 GHz ticks");
  }
  i128 t = num / den;
  if (t > static_cast<i128>(std::numeric_limits<std::uint64_t>::max())) {
    throw NonRepresentableDuration(render(d) + " overflows the tick counter");
  }
  return SimTime{static_cast<std::uint64_t>(t)};
}

Rational parse_decimal(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty number");
  std::size_t i = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    ++i;
  }
  std::int64_t num = 0;
  std::int64_t den = 1;
  bool seen_point = false;
  bool seen_digit = false;
  constexpr std::int64_t kLimit = std::numeric_limits<std::int64_t>::max() / 10;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (seen_point) throw std::invalid_argument("malformed number: " + std::string(text));
      seen_point = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw std::invalid_argument("malformed number: " + std::string(text));
    }
    seen_digit = true;
    if (num > kLimit || (seen_point && den > kLimit)) {
      throw std::invalid_argument("number has too many digits: " + std::string(text));
    }
    num = num * 10 + (c - '0');
    if (seen_point) den *= 10;
  }
  if (!seen_digit) throw std::invalid_argument("malformed number: " + std::string(text));
  return Rational{negative ? -num : num, den};
}

Frequency parse_frequency(std::string_view text) {
  std::size_t n = decimal_prefix(text);
  if (n == 0) throw std::invalid_argument("malformed frequency: " + std::string(text));
  Rational value = parse_decimal(text.substr(0, n));
  std::string_view unit = text.substr(n);
  std::int64_t scale = 0;
  if (unit == "Hz") scale = 1;
  else if (unit == "kHz") scale = 1'000;
  else if (unit == "MHz") scale = 1'000'000;
  else if (unit == "GHz") scale = 1'000'000'000;
  else throw std::invalid_argument("unknown frequency unit in: " + std::string(text));
  return Frequency{value * scale};
}

Duration parse_duration(std::string_view text) {
  if (!starts_with_digit_or_sign(text)) {
    throw std::invalid_argument("malformed duration: " + std::string(text));
  }
  std::size_t n = decimal_prefix(text);
  Rational value = parse_decimal(text.substr(0, n));
  std::string_view unit = text.substr(n);
  if (unit == "ps") return Duration::ps(value);
  if (unit == "ns") return Duration::ns(value);
  if (unit == "us") return Duration::us(value);
  if (unit == "ms") return Duration::ms(value);
  if (unit == "s") return Duration::s(value);
  constexpr std::string_view kCycles = "cycles@";
  if (unit.substr(0, kCycles.size()) == kCycles) {
    return Duration::cycles(value, parse_frequency(unit.substr(kCycles.size())));
  }
  throw std::invalid_argument("unknown duration unit in: " + std::string(text));
}

SimTime parse_time(std::string_view text) { return ticks_of(parse_duration(text)); }

std::string to_decimal(Rational r, int max_places) {
  i128 num = r.numerator();
  i128 den = r.denominator();
  bool negative = num < 0;
  if (negative) num = -num;
  i128 scale = 1;
  for (int i = 0; i < max_places; ++i) scale *= 10;
  i128 scaled = (num * scale * 2 + den) / (den * 2);  // round half up
  auto whole = static_cast<std::uint64_t>(scaled / scale);
  auto frac = static_cast<std::uint64_t>(scaled % scale);
  std::string out = (negative && scaled != 0 ? "-" : "") + std::to_string(whole);
  if (frac != 0) {
    std::string digits = fmt::format("{:0{}}", frac, max_places);
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    out += "." + digits;
  }
  return out;
}

std::string format_ns(SimTime t, int max_places) {
  // 1 ns = 82.5 ticks
  return to_decimal(Rational{static_cast<std::int64_t>(t.ticks) * 2, 165}, max_places);
}

}  // namespace qcsim
