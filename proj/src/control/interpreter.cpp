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

#include "qcsim/control/interpreter.hpp"

#include <fmt/format.h>

namespace qcsim::control {

const char* to_string(BitSource s) {
  switch (s) {
    case BitSource::Local: return "local";
    case BitSource::FeedForward: return "feed-forward";
    case BitSource::Unknown: return "unknown";
  }
  return "?";
}

BoardInterpreter::BoardInterpreter(Engine& engine, Board& board, BoardContext context)
    : engine_(&engine), board_(&board), ctx_(context) {}

void BoardInterpreter::load(BoardBinary binary) {
  if (binary.board != board_->id()) {
    throw std::invalid_argument(fmt::format("binary for board {} loaded on board {}", binary.board, board_->id()));
  }
  if (running_) throw std::logic_error(fmt::format("board {} is running; cannot replace its binary", board_->id()));
  binary_ = std::move(binary);
}

void BoardInterpreter::start(unsigned shot) {
  if (!binary_) throw std::logic_error(fmt::format("board {} has no binary", board_->id()));
  if (running_) {
    throw std::logic_error(fmt::format("board {} still running shot {} at start of shot {}", board_->id(), shot_, shot));
  }
  shot_ = shot;
  pc_ = 0;
  steps_ = 0;
  branched_ = false;
  bits_.clear();
  running_ = true;
  started_at_ = engine_->now();
  finished_at_.reset();
  step_board();
}

void BoardInterpreter::schedule_next(SimTime ready) {
  const SimTime at = board_->control_clock().next_edge(ready);
  engine_->schedule(at, "ctl.step", Target{board_->id(), -1}, [this] { step_board(); },
                    Json{{"shot", shot_}, {"pc", pc_}});
}

std::pair<std::uint8_t, BranchRecord> BoardInterpreter::read_bit(unsigned bit) {
  BranchRecord rec;
  rec.board = board_->id();
  rec.shot = shot_;
  rec.t = engine_->now();
  rec.bit = bit;
  if (ctx_.bit_to_qubit) {
    if (auto it = ctx_.bit_to_qubit->find(bit); it != ctx_.bit_to_qubit->end()) rec.qubit = it->second;
  }
  if (auto it = bits_.find(bit); it != bits_.end()) {
    rec.source = BitSource::Local;
    rec.value = it->second.first;
    rec.data_updated = it->second.second;
    return {rec.value, rec};
  }
  if (ctx_.feed_forward && rec.qubit) {
    const fsm::QueryAnswer a = ctx_.feed_forward->ff_query(*rec.qubit);
    engine_->log("ff.query", Target{board_->id(), -1},
                 Json{{"qubit", *rec.qubit}, {"known", a.known}, {"state", a.state}});
    if (a.known) {
      rec.source = BitSource::FeedForward;
      rec.value = a.state;
      rec.data_updated = ctx_.feed_forward->updated_at(*rec.qubit);
      return {rec.value, rec};
    }
  }
  rec.source = BitSource::Unknown;
  rec.value = 0;
  ++warnings_;
  engine_->log("ctl.warning", Target{board_->id(), -1},
               Json{{"shot", shot_}, {"message", fmt::format("c{} unknown at branch; read as 0", bit)}});
  return {0, rec};
}

void BoardInterpreter::step_board() {
  if (!running_) return;
  if (++steps_ > kMaxStepsPerShot) {
    running_ = false;
    throw RunawayProgram(fmt::format("board {} exceeded {} steps in shot {}", board_->id(), kMaxStepsPerShot, shot_));
  }
  const Instruction& ins = binary_->instructions.at(pc_);
  const SimTime now = engine_->now();
  const Target here{board_->id(), -1};

  std::visit(
      [&](const auto& i) {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, Pulse>) {
          PulseRecord p{board_->id(), shot_, now, i.length, i.frequency_hz, i.amplitude_v, branched_};
          pulses_.push_back(p);
          engine_->log("ctl.pulse", here, to_json(p));
          ++pc_;
          schedule_next(now + i.length);
        } else if constexpr (std::is_same_v<T, Measure>) {
          if (!ctx_.emulator) throw std::logic_error("measure without a readout emulator");
          MeasureRecord m;
          m.board = board_->id();
          m.shot = shot_;
          m.qubit = i.qubit;
          m.bit = i.dest;
          m.state = ctx_.emulator->next_result(i.qubit);
          m.t_start = now;
          m.t_end = now + i.pulse_length;
          m.available = ctx_.emulator->available_at(m.t_end);
          measures_.push_back(m);
          engine_->log("ctl.measure", here,
                       Json{{"shot", shot_}, {"qubit", m.qubit}, {"bit", m.bit}, {"end_ticks", m.t_end.ticks},
                            {"available_ticks", m.available.ticks}});
          const unsigned shot = shot_;
          engine_->schedule(m.available, "ctl.result", here,
                            [this, m, shot] {
                              if (shot != shot_) return;  // a later shot already started
                              bits_[m.bit] = {m.state, engine_->now()};
                              if (ctx_.readout) ctx_.readout->capture_result(m.qubit, m.state, engine_->now());
                            },
                            Json{{"shot", shot}, {"qubit", m.qubit}, {"bit", m.bit}, {"state", m.state}});
          ++pc_;
          schedule_next(now);
        } else if constexpr (std::is_same_v<T, Hold>) {
          engine_->log("ctl.hold", here, Json{{"shot", shot_}, {"until_ticks", (now + i.duration).ticks}});
          ++pc_;
          schedule_next(now + i.duration);
        } else if constexpr (std::is_same_v<T, BranchIfBit>) {
          auto [value, rec] = read_bit(i.bit);
          rec.expected = i.expected;
          rec.taken = value == i.expected;
          branches_.push_back(rec);
          branched_ = true;
          engine_->log("ctl.branch", here,
                       Json{{"shot", shot_}, {"bit", i.bit}, {"value", value}, {"expected", i.expected},
                            {"taken", rec.taken}, {"source", to_string(rec.source)}});
          pc_ = rec.taken ? i.target : pc_ + 1;
          schedule_next(now);
        } else if constexpr (std::is_same_v<T, Jump>) {
          pc_ = i.target;
          schedule_next(now);
        } else {
          running_ = false;
          finished_at_ = now;
          engine_->log("ctl.end", here, Json{{"shot", shot_}});
        }
      },
      ins);
}

Json to_json(const PulseRecord& p) {
  return Json{{"shot", p.shot},
              {"t_start_ticks", p.t_start.ticks},
              {"length_ticks", p.length.ticks},
              {"amplitude_V", to_decimal(p.amplitude_v)},
              {"frequency_GHz", to_decimal(p.frequency_hz / 1'000'000'000)},
              {"conditional", p.conditional}};
}

}  // namespace qcsim::control
