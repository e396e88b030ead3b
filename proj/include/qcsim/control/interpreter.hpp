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
 * @file interpreter.hpp
 * @brief Per-board sequencer executing a BoardBinary on the event engine.
 *
 * Timing rules: Pulse and Hold block for their duration, everything else
 * takes zero time. Each instruction is dispatched on the board's next
 * control-clock edge, so dispatch adds less than one cycle. Measure starts a
 * readout and returns immediately; the result is written to its classical bit
 * (and captured by the readout FSM on the root) at pulse end plus the
 * emulator's demodulation delay.
 */

#pragma once

#include "qcsim/control/emulator.hpp"
#include "qcsim/control/program.hpp"
#include "qcsim/core/engine.hpp"
#include "qcsim/fsm/feed_forward_fsm.hpp"
#include "qcsim/fsm/readout_fsm.hpp"

#include <map>
#include <optional>
#include <vector>

namespace qcsim::control {

class RunawayProgram : public Error {
 public:
  using Error::Error;
};

struct PulseRecord {
  BoardId board = -1;
  unsigned shot = 0;
  SimTime t_start;
  SimTime length;
  Rational frequency_hz;
  Rational amplitude_v;
  bool conditional = false;  // issued after the first branch of the shot
};

struct MeasureRecord {
  BoardId board = -1;
  unsigned shot = 0;
  unsigned qubit = 0;
  unsigned bit = 0;
  std::uint8_t state = 0;
  SimTime t_start;
  SimTime t_end;
  SimTime available;
};

enum class BitSource { Local, FeedForward, Unknown };
const char* to_string(BitSource s);

struct BranchRecord {
  BoardId board = -1;
  unsigned shot = 0;
  SimTime t;
  unsigned bit = 0;
  std::optional<unsigned> qubit;
  std::uint8_t value = 0;
  std::uint8_t expected = 0;
  bool taken = false;
  BitSource source = BitSource::Unknown;
  std::optional<SimTime> data_updated;  // when the value used was written
};

/// What a board can reach besides its own clock.
struct BoardContext {
  ReadoutEmulator* emulator = nullptr;
  fsm::ReadoutFsm* readout = nullptr;            // star root only
  fsm::FeedForwardFsm* feed_forward = nullptr;   // star leaves only
  const std::map<unsigned, unsigned>* bit_to_qubit = nullptr;
};

class BoardInterpreter {
 public:
  static constexpr std::size_t kMaxStepsPerShot = 1'000'000;

  BoardInterpreter(Engine& engine, Board& board, BoardContext context);
  BoardInterpreter(const BoardInterpreter&) = delete;
  BoardInterpreter& operator=(const BoardInterpreter&) = delete;

  void load(BoardBinary binary);
  bool loaded() const { return binary_.has_value(); }
  const BoardBinary& binary() const { return *binary_; }

  /// Begins instruction 0 at now(); clears classical bits.
  void start(unsigned shot);

  /// Executes the instruction at the program counter and schedules the next
  /// dispatch. Throws RunawayProgram past kMaxStepsPerShot steps.
  void step_board();

  bool running() const { return running_; }
  std::optional<SimTime> started_at() const { return started_at_; }
  std::optional<SimTime> finished_at() const { return finished_at_; }
  BoardId board_id() const { return board_->id(); }

  const std::vector<PulseRecord>& pulses() const { return pulses_; }
  const std::vector<MeasureRecord>& measures() const { return measures_; }
  const std::vector<BranchRecord>& branches() const { return branches_; }
  std::size_t warnings() const { return warnings_; }

 private:
  void schedule_next(SimTime ready);
  std::pair<std::uint8_t, BranchRecord> read_bit(unsigned bit);

  Engine* engine_;
  Board* board_;
  BoardContext ctx_;
  std::optional<BoardBinary> binary_;
  std::size_t pc_ = 0;
  unsigned shot_ = 0;
  bool running_ = false;
  bool branched_ = false;
  std::size_t steps_ = 0;
  std::map<unsigned, std::pair<std::uint8_t, SimTime>> bits_;
  std::optional<SimTime> started_at_;
  std::optional<SimTime> finished_at_;
  std::vector<PulseRecord> pulses_;
  std::vector<MeasureRecord> measures_;
  std::vector<BranchRecord> branches_;
  std::size_t warnings_ = 0;
};

Json to_json(const PulseRecord& p);

}  // namespace qcsim::control
