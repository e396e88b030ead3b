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
 * @file ptp.hpp
 * @brief Minimal two-way pulse exchange between neighbouring boards.
 *
 * The primary emits a pulse at its counter value t1; the secondary latches it
 * at t2 on its own counter, answers at t3 and the primary latches the answer
 * at t4. With a symmetric path
 *
 *   offset  = ((t2 - t1) - (t4 - t3)) / 2
 *   transit = ((t4 - t1) - (t3 - t2)) / 2
 *
 * Both are in control-clock cycles. A positive offset means the secondary
 * counter reads ahead of the primary.
 */

#pragma once

#include "qcsim/core/board.hpp"
#include "qcsim/core/engine.hpp"
#include "qcsim/core/error.hpp"

#include <cstdint>
#include <functional>

namespace qcsim::ptp {

class NegativeTransit : public Error {
 public:
  using Error::Error;
};

struct PtpExchange {
  std::int64_t t1 = 0;  // primary domain
  std::int64_t t2 = 0;  // secondary domain
  std::int64_t t3 = 0;  // secondary domain
  std::int64_t t4 = 0;  // primary domain

  friend bool operator==(const PtpExchange&, const PtpExchange&) = default;
};

/// A value in half-cycle resolution: whole + half / 2, with `whole` rounded
/// toward zero and `half` in {-1, 0, +1} carrying the dropped residual.
struct HalfCycles {
  std::int64_t whole = 0;
  int half = 0;

  Rational exact() const { return Rational{whole} + Rational{half, 2}; }
  bool has_residual() const { return half != 0; }

  friend bool operator==(const HalfCycles&, const HalfCycles&) = default;
};

HalfCycles compute_offset(const PtpExchange& x);

/// Throws NegativeTransit when the round trip is shorter than the
/// secondary's turnaround, which only an asymmetric or broken link produces.
HalfCycles compute_transit(const PtpExchange& x);

struct SyncLink {
  SimTime forward_delay;  // primary -> secondary
  SimTime reverse_delay;  // secondary -> primary

  bool symmetric() const { return forward_delay == reverse_delay; }
};

struct ExchangeOptions {
  // Secondary answers when its counter has advanced this far past t2.
  std::int64_t turnaround_cycles = 4;
};

/// Schedules the four pulse events of one exchange, starting at the first
/// primary clock edge at or after now(). `done` runs inside the event that
/// latches t4.
void start_exchange(Engine& engine, Board& primary, Board& secondary, const SyncLink& link,
                    std::function<void(const PtpExchange&)> done, ExchangeOptions options = {});

/// Runs one exchange to completion on the engine and returns its timestamps.
PtpExchange perform_exchange(Engine& engine, Board& primary, Board& secondary, const SyncLink& link,
                             ExchangeOptions options = {});

/// Aligns a secondary to its primary: counter_correction -= offset.
void apply_correction(Board& board, std::int64_t offset);

}  // namespace qcsim::ptp
