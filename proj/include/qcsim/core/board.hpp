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

#include "qcsim/core/clock.hpp"

#include <array>
#include <map>
#include <vector>

namespace qcsim {

using BoardId = int;

enum class SyncPortRole { Upstream, Downstream };

struct SyncPort {
  SyncPortRole role;
  BoardId peer = -1;  // -1 until the ring is wired
};

inline constexpr std::size_t kMaxLanesPerBoard = 4;

/// One FPGA board: a control clock, two ring sync ports and up to four
/// single-lane serial links.
class Board {
 public:
  Board(BoardId id, ClockDomain control_clock);

  BoardId id() const { return id_; }
  ClockDomain& control_clock() { return clock_; }
  const ClockDomain& control_clock() const { return clock_; }

  const std::array<SyncPort, 2>& sync_ports() const { return ports_; }
  void connect_upstream(BoardId peer) { ports_[0].peer = peer; }
  void connect_downstream(BoardId peer) { ports_[1].peer = peer; }

  const std::vector<int>& lanes() const { return lanes_; }
  /// Claims the next free lane index; throws IndexOutOfRange past four.
  int add_lane();

 private:
  BoardId id_;
  ClockDomain clock_;
  std::array<SyncPort, 2> ports_{SyncPort{SyncPortRole::Upstream}, SyncPort{SyncPortRole::Downstream}};
  std::vector<int> lanes_;
};

/// Owns every board of a simulated cluster, keyed by id.
class Cluster {
 public:
  Board& add(Board board);
  Board& board(BoardId id);
  const Board& board(BoardId id) const;
  bool contains(BoardId id) const { return boards_.count(id) != 0; }
  std::vector<BoardId> ids() const;
  std::size_t size() const { return boards_.size(); }

 private:
  std::map<BoardId, Board> boards_;
};

}  // namespace qcsim
