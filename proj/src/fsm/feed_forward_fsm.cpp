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

#include "qcsim/fsm/feed_forward_fsm.hpp"

namespace qcsim::fsm {

void FeedForwardFsm::ff_store(const link::LinkFrame& frame, SimTime t) {
  if (!frame.crc_ok()) {
    ++dropped_;
    engine_->log("ff.drop", Target{board_, -1}, Json{{"sequence", frame.sequence}, {"dropped", dropped_}});
    return;
  }
  for (std::size_t w = 0; w < frame.payload.size(); ++w) {
    const unsigned group = frame.sequence + static_cast<unsigned>(w);
    const std::uint64_t word = frame.payload[w];
    if (registers_.size() <= group) registers_.resize(group + 1, 0);
    for (const frame::QubitResult& r : frame::decode(word)) {
      const std::uint64_t mask = frame::slot_mask(r.index);
      registers_[group] = (registers_[group] & ~mask) | (word & mask);
      const unsigned qubit = group * frame::kSlotsPerFrame + r.index;
      if (updated_.size() <= qubit) updated_.resize(qubit + 1);
      updated_[qubit] = t;
    }
  }
  ++stored_;
  last_update_ = t;
  engine_->log("ff.store", Target{board_, -1},
               Json{{"sequence", frame.sequence}, {"register", frame::to_hex(register_word(frame.sequence))}});
}

QueryAnswer FeedForwardFsm::ff_query(unsigned qubit) const {
  const unsigned group = qubit / frame::kSlotsPerFrame;
  const unsigned index = qubit % frame::kSlotsPerFrame;
  if (group >= registers_.size()) return QueryAnswer{qubit, 0, false};
  const std::uint64_t slot = (registers_[group] >> (frame::kBitsPerSlot * index)) & 0b111u;
  if (!(slot & 0b100u)) return QueryAnswer{qubit, 0, false};
  return QueryAnswer{qubit, static_cast<std::uint8_t>(slot & 0b11u), true};
}

std::vector<QueryAnswer> FeedForwardFsm::ff_query(std::span<const unsigned> qubits) const {
  std::vector<QueryAnswer> out;
  out.reserve(qubits.size());
  for (unsigned q : qubits) out.push_back(ff_query(q));
  return out;
}

void FeedForwardFsm::clear() {
  registers_.clear();
  updated_.clear();
  last_update_.reset();
}

std::uint64_t FeedForwardFsm::register_word(unsigned group) const {
  return group < registers_.size() ? registers_[group] : 0;
}

std::optional<SimTime> FeedForwardFsm::updated_at(unsigned qubit) const {
  return qubit < updated_.size() ? updated_[qubit] : std::nullopt;
}

}  // namespace qcsim::fsm
