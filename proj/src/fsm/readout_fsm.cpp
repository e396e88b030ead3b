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

#include "qcsim/fsm/readout_fsm.hpp"

#include <algorithm>

namespace qcsim::fsm {

const char* to_string(ReadoutPhase p) {
  switch (p) {
    case ReadoutPhase::Idle: return "Idle";
    case ReadoutPhase::Accumulating: return "Accumulating";
    case ReadoutPhase::Transmitting: return "Transmitting";
    case ReadoutPhase::CoolDown: return "CoolDown";
  }
  return "?";
}

ReadoutFsm::ReadoutFsm(Engine& engine, BoardId board, unsigned qubit_count, SimTime broadcast_gap)
    : engine_(&engine), board_(board), gap_(broadcast_gap), slots_(qubit_count), transmitted_(qubit_count) {}

bool ReadoutFsm::has_pending() const {
  return std::any_of(slots_.begin(), slots_.end(), [](const PendingSlot& s) { return s.locked; });
}

void ReadoutFsm::set_phase(ReadoutPhase p) {
  if (p == phase_) return;
  engine_->log("fsm.phase", Target{board_, -1}, Json{{"from", to_string(phase_)}, {"to", to_string(p)}});
  phase_ = p;
}

SimTime ReadoutFsm::next_allowed() const { return last_tx_ ? *last_tx_ + gap_ : SimTime{}; }

void ReadoutFsm::arm() {
  if (armed_) return;
  armed_ = true;
  const SimTime at = std::max(engine_->now(), next_allowed());
  engine_->schedule(at, "fsm.broadcast", Target{board_, -1}, [this]() {
    armed_ = false;
    broadcast_ready_frames(engine_->now());
  });
}

CaptureOutcome ReadoutFsm::capture_result(unsigned qubit, std::uint8_t state, SimTime t) {
  if (qubit >= slots_.size()) {
    throw IndexOutOfRange("readout FSM on board " + std::to_string(board_) + " has " +
                          std::to_string(slots_.size()) + " qubits, got q" + std::to_string(qubit));
  }
  if (state > 3) throw std::invalid_argument("qubit state exceeds 2 bits");
  PendingSlot& slot = slots_[qubit];
  if (slot.locked) {
    ++rejected_;
    engine_->log("fsm.capture", Target{board_, -1},
                 Json{{"qubit", qubit}, {"state", state}, {"accepted", false}, {"t_ticks", t.ticks},
                      {"overwrite_attempts", rejected_}});
    return CaptureOutcome::Rejected;
  }
  slot = PendingSlot{state, true, true};
  engine_->log("fsm.capture", Target{board_, -1},
               Json{{"qubit", qubit}, {"state", state}, {"accepted", true}, {"t_ticks", t.ticks}});
  if (phase_ == ReadoutPhase::Idle) set_phase(ReadoutPhase::Accumulating);
  arm();
  return CaptureOutcome::Accepted;
}

std::vector<link::Delivery> ReadoutFsm::broadcast_ready_frames(SimTime t) {
  std::vector<link::Delivery> out;
  if (!has_pending()) {
    if (phase_ == ReadoutPhase::Accumulating) set_phase(ReadoutPhase::Idle);
    return out;
  }
  if (t < next_allowed()) {
    if (phase_ == ReadoutPhase::Idle) set_phase(ReadoutPhase::Accumulating);
    arm();
    return out;
  }

  const auto first = static_cast<unsigned>(
      std::find_if(slots_.begin(), slots_.end(), [](const PendingSlot& s) { return s.locked; }) - slots_.begin());
  const unsigned group = first / frame::kSlotsPerFrame;
  const unsigned base = group * frame::kSlotsPerFrame;
  const unsigned limit = std::min<unsigned>(base + frame::kSlotsPerFrame, qubit_count());

  std::vector<frame::QubitResult> results;
  for (unsigned q = base; q < limit; ++q) {
    PendingSlot& s = slots_[q];
    if (!s.locked) continue;
    results.push_back(frame::QubitResult{q - base, s.state, true});
    transmitted_[q] = s.state;
    s = PendingSlot{};  // unlocked at transmission start
  }
  const std::uint64_t word = frame::encode(results);

  set_phase(ReadoutPhase::Transmitting);
  const link::LinkFrame lf = link::LinkFrame::seal({word}, group);
  for (link::SimplexChannel* lane : lanes_) out.push_back(lane->transmit(lf, t));
  last_tx_ = t;
  transmissions_.push_back(FrameTransmission{t, group, word, out});
  engine_->log("fsm.frame_tx", Target{board_, -1},
               Json{{"word", frame::to_hex(word)}, {"sequence", group}, {"lanes", out.size()},
                    {"t_ticks", t.ticks}, {"slots", results.size()}});
  set_phase(ReadoutPhase::CoolDown);

  engine_->schedule(t + gap_, "fsm.gap_expired", Target{board_, -1}, [this]() {
    if (phase_ != ReadoutPhase::CoolDown) return;
    set_phase(has_pending() ? ReadoutPhase::Accumulating : ReadoutPhase::Idle);
  });
  if (has_pending()) arm();
  return out;
}

void ReadoutFsm::reset() {
  std::fill(slots_.begin(), slots_.end(), PendingSlot{});
  std::fill(transmitted_.begin(), transmitted_.end(), std::nullopt);
  if (phase_ == ReadoutPhase::Accumulating) set_phase(ReadoutPhase::Idle);
}

}  // namespace qcsim::fsm
