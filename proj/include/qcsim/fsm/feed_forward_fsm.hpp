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

#pragma once

#include "qcsim/core/engine.hpp"
#include "qcsim/frame/readout_frame.hpp"
#include "qcsim/link/lane.hpp"

#include <optional>
#include <span>
#include <vector>

namespace qcsim::fsm {

struct QueryAnswer {
  unsigned qubit = 0;
  std::uint8_t state = 0;
  bool known = false;

  friend bool operator==(const QueryAnswer&, const QueryAnswer&) = default;
};

/// Leaf-side result register fed by frames from the root.
class FeedForwardFsm {
 public:
  FeedForwardFsm(Engine& engine, BoardId board) : engine_(&engine), board_(board) {}

  /// Merges the valid slots of a frame; a frame failing its CRC is dropped
  /// and counted instead.
  void ff_store(const link::LinkFrame& frame, SimTime t);

  /// Read-only. Qubits never seen valid come back with known = false.
  std::vector<QueryAnswer> ff_query(std::span<const unsigned> qubits) const;
  QueryAnswer ff_query(unsigned qubit) const;

  void clear();

  /// Register image of 21-qubit group `group` in frame layout.
  std::uint64_t register_word(unsigned group = 0) const;

  std::optional<SimTime> last_update() const { return last_update_; }
  std::optional<SimTime> updated_at(unsigned qubit) const;
  std::size_t stored_frames() const { return stored_; }
  std::size_t dropped_frames() const { return dropped_; }
  BoardId board() const { return board_; }

 private:
  Engine* engine_;
  BoardId board_;
  std::vector<std::uint64_t> registers_;
  std::vector<std::optional<SimTime>> updated_;
  std::optional<SimTime> last_update_;
  std::size_t stored_ = 0;
  std::size_t dropped_ = 0;
};

}  // namespace qcsim::fsm
