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
 * @file readout_fsm.hpp
 * @brief Root-side state machine turning readout results into broadcast frames.
 *
 *   Idle --capture--> Accumulating --gap open--> Transmitting --sent--> CoolDown
 *    ^                     ^                                                |
 *    |                     +------- gap expired, results pending -----------+
 *    +----------------------------- gap expired, nothing pending -----------+
 *
 * A captured result locks its slot until the frame carrying it starts
 * transmission; results arriving for a locked slot are rejected and counted.
 * Frames leave as soon as one slot is pending and at least broadcast_gap has
 * passed since the previous frame start.
 */

#pragma once

#include "qcsim/core/engine.hpp"
#include "qcsim/frame/readout_frame.hpp"
#include "qcsim/link/lane.hpp"

#include <optional>
#include <vector>

namespace qcsim::fsm {

/// 32 ns at 82.5 GHz.
inline constexpr SimTime kDefaultBroadcastGap{2640};

enum class ReadoutPhase { Idle, Accumulating, Transmitting, CoolDown };
const char* to_string(ReadoutPhase p);

enum class CaptureOutcome { Accepted, Rejected };

struct PendingSlot {
  std::uint8_t state = 0;
  bool valid = false;
  bool locked = false;
};

struct FrameTransmission {
  SimTime t;
  std::uint32_t sequence = 0;  // 21-qubit group carried by this frame
  std::uint64_t word = 0;
  std::vector<link::Delivery> deliveries;
};

class ReadoutFsm {
 public:
  ReadoutFsm(Engine& engine, BoardId board, unsigned qubit_count, SimTime broadcast_gap = kDefaultBroadcastGap);
  ReadoutFsm(const ReadoutFsm&) = delete;
  ReadoutFsm& operator=(const ReadoutFsm&) = delete;

  /// Adds a root lane; every frame is sent on all attached lanes.
  void attach_lane(link::SimplexChannel& lane) { lanes_.push_back(&lane); }

  /// Throws IndexOutOfRange for qubit >= qubit_count.
  CaptureOutcome capture_result(unsigned qubit, std::uint8_t state, SimTime t);

  /// Sends the lowest pending 21-qubit group if the gap allows; otherwise
  /// arms a deferred broadcast and returns nothing.
  std::vector<link::Delivery> broadcast_ready_frames(SimTime t);

  /// Drops pending results and the transmitted image (new shot). The gap
  /// timer keeps running.
  void reset();

  ReadoutPhase phase() const { return phase_; }
  const PendingSlot& slot(unsigned qubit) const { return slots_.at(qubit); }
  unsigned qubit_count() const { return static_cast<unsigned>(slots_.size()); }
  std::size_t overwrite_attempts() const { return rejected_; }
  SimTime broadcast_gap() const { return gap_; }
  const std::vector<FrameTransmission>& transmissions() const { return transmissions_; }

  /// Last transmitted value per qubit since reset (what leaves should hold).
  const std::vector<std::optional<std::uint8_t>>& transmitted_state() const { return transmitted_; }

  bool has_pending() const;

 private:
  void set_phase(ReadoutPhase p);
  void arm();
  SimTime next_allowed() const;

  Engine* engine_;
  BoardId board_;
  SimTime gap_;
  std::vector<PendingSlot> slots_;
  std::vector<std::optional<std::uint8_t>> transmitted_;
  std::vector<link::SimplexChannel*> lanes_;
  std::vector<FrameTransmission> transmissions_;
  std::optional<SimTime> last_tx_;
  ReadoutPhase phase_ = ReadoutPhase::Idle;
  bool armed_ = false;
  std::size_t rejected_ = 0;
};

}  // namespace qcsim::fsm
