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
 * @file lane.hpp
 * @brief Timing model of a single-lane 64B/66B framed serial link.
 *
 * The user interface moves one 64-bit word per user-clock cycle
 * (10.3125 Gb/s / 64 = 161.1328125 MHz, 512 ticks). Not every cycle can carry
 * user data:
 *
 *   - the gearbox drops one cycle in every 33 (cycle c with c % 33 == 32),
 *     which is the same 64/66 ratio as the line encoding;
 *   - clock compensation takes the first 8 cycles of every 4992.
 *
 * A frame submitted at tick t is accepted into the serializer on the first
 * data cycle at or after the next user-clock edge, one word per data cycle.
 * Its delivery time is
 *
 *   (last accepted cycle + 1) * 512 + (tx_cdc + rx_cdc) * 512 + fiber_delay
 *
 * so a one-word frame submitted on a data cycle arrives 5 user cycles later
 * with the default two-cycle CDC FIFOs and no fiber. The CRC rides in the
 * frame trailer and costs no user cycle.
 */

#pragma once

#include "qcsim/core/board.hpp"
#include "qcsim/core/engine.hpp"
#include "qcsim/core/error.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <vector>

namespace qcsim::link {

class FifoOverflow : public Error {
 public:
  using Error::Error;
};

struct LaneConfig {
  Rational line_rate_bps{10'312'500'000};
  Frequency reference_clock{Rational{156'250'000}};  // recorded for fidelity, not timed
  Frequency init_clock{Rational{125'000'000}};       // recorded for fidelity, not timed
  SimTime fiber_delay{};
  std::size_t tx_cdc_depth = 64;
  std::size_t rx_cdc_depth = 64;
  std::uint32_t tx_cdc_latency_cycles = 2;
  std::uint32_t rx_cdc_latency_cycles = 2;

  /// line_rate / 64: one user word per cycle.
  Frequency user_clock() const { return Frequency{line_rate_bps / 64}; }
  SimTime user_cycle() const { return user_clock().period(); }

  void validate() const;
};

struct LaneSchedule {
  std::uint64_t pause_period = 33;  // 0 disables gearbox pauses
  std::uint64_t comp_period = 4992;  // 0 disables clock compensation
  std::uint64_t comp_length = 8;

  bool is_pause_cycle(std::uint64_t c) const { return pause_period != 0 && c % pause_period == pause_period - 1; }
  bool is_compensation_cycle(std::uint64_t c) const { return comp_period != 0 && c % comp_period < comp_length; }
  bool is_data_cycle(std::uint64_t c) const { return !is_pause_cycle(c) && !is_compensation_cycle(c); }

  std::uint64_t first_data_cycle_from(std::uint64_t c) const;

  /// Number of data cycles in [begin, end), in closed form.
  std::uint64_t count_data_cycles(std::uint64_t begin, std::uint64_t end) const;

  void validate() const;
};

inline bool is_data_cycle(const LaneSchedule& s, std::uint64_t c) { return s.is_data_cycle(c); }

struct LinkFrame {
  std::vector<std::uint64_t> payload;
  std::uint32_t crc = 0;
  std::uint32_t sequence = 0;  // frame index within a multi-frame broadcast (metadata)

  /// Builds a frame whose CRC matches its payload.
  static LinkFrame seal(std::vector<std::uint64_t> payload, std::uint32_t sequence = 0);

  bool crc_ok() const;
  std::size_t bit_count() const { return payload.size() * 64; }
};

/// Flips one payload bit, keeping the original CRC. Throws IndexOutOfRange.
LinkFrame corrupt(LinkFrame frame, std::size_t bit_index);

struct Delivery {
  int lane = -1;
  BoardId from = -1;
  BoardId to = -1;
  SimTime submitted;
  std::uint64_t submit_cycle = 0;  // first user-clock edge at or after submission
  std::uint64_t first_cycle = 0;   // first word accepted
  std::uint64_t last_cycle = 0;    // last word accepted
  SimTime delivered;
  std::size_t words = 0;
  bool crc_ok = true;
  std::uint32_t sequence = 0;

  SimTime latency() const { return delivered - submitted; }
};

/// One direction of a lane.
class SimplexChannel {
 public:
  using Receiver = std::function<void(const LinkFrame&, const Delivery&)>;
  using FaultInjector = std::function<void(LinkFrame&)>;

  SimplexChannel(Engine& engine, LaneConfig config, LaneSchedule schedule, int lane, BoardId from, BoardId to);
  SimplexChannel(const SimplexChannel&) = delete;
  SimplexChannel& operator=(const SimplexChannel&) = delete;

  void connect(Receiver receiver) { receiver_ = std::move(receiver); }
  void set_fault_injector(FaultInjector f) { fault_ = std::move(f); }

  /// Schedules the frame's delivery. t_submit must be >= now() and no
  /// earlier than the previous submission. Throws FifoOverflow.
  Delivery transmit(const LinkFrame& frame, SimTime t_submit);
  Delivery transmit(const LinkFrame& frame) { return transmit(frame, engine_->now()); }

  /// Words still waiting in the tx FIFO at user cycle `cycle`.
  std::size_t tx_occupancy(std::uint64_t cycle) const;

  const LaneConfig& config() const { return config_; }
  const LaneSchedule& schedule() const { return schedule_; }
  const std::vector<Delivery>& deliveries() const { return deliveries_; }
  int lane() const { return lane_; }
  BoardId from() const { return from_; }
  BoardId to() const { return to_; }

 private:
  Engine* engine_;
  LaneConfig config_;
  LaneSchedule schedule_;
  SimTime cycle_;
  int lane_;
  BoardId from_;
  BoardId to_;
  Receiver receiver_;
  FaultInjector fault_;
  std::deque<std::uint64_t> queued_;  // accept cycles of words not yet serialized
  std::uint64_t next_free_cycle_ = 0;
  SimTime last_submit_{};
  std::vector<Delivery> deliveries_;
};

/// A full-duplex lane: two independent directions between boards a and b.
struct DuplexLane {
  SimplexChannel a_to_b;
  SimplexChannel b_to_a;

  DuplexLane(Engine& engine, const LaneConfig& config, const LaneSchedule& schedule, int lane, BoardId a,
             BoardId b)
      : a_to_b(engine, config, schedule, lane, a, b), b_to_a(engine, config, schedule, lane, b, a) {}
};

Json to_json(const Delivery& d);

}  // namespace qcsim::link
