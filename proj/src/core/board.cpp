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

#include "qcsim/core/board.hpp"

#include "qcsim/core/error.hpp"

#include <stdexcept>
#include <string>

namespace qcsim {

Board::Board(BoardId id, ClockDomain control_clock) : id_(id), clock_(control_clock) {}

int Board::add_lane() {
  if (lanes_.size() >= kMaxLanesPerBoard) {
    throw IndexOutOfRange("board " + std::to_string(id_) + " has no free lane (max 4)");
  }
  lanes_.push_back(static_cast<int>(lanes_.size()));
  return lanes_.back();
}

Board& Cluster::add(Board board) {
  const BoardId id = board.id();
  auto [it, inserted] = boards_.emplace(id, std::move(board));
  if (!inserted) throw std::invalid_argument("duplicate board id " + std::to_string(id));
  return it->second;
}

Board& Cluster::board(BoardId id) {
  auto it = boards_.find(id);
  if (it == boards_.end()) throw UnknownBoard("unknown board " + std::to_string(id));
  return it->second;
}

const Board& Cluster::board(BoardId id) const {
  auto it = boards_.find(id);
  if (it == boards_.end()) throw UnknownBoard("unknown board " + std::to_string(id));
  return it->second;
}

std::vector<BoardId> Cluster::ids() const {
  std::vector<BoardId> out;
  out.reserve(boards_.size());
  for (const auto& [id, _] : boards_) out.push_back(id);
  return out;
}

}  // namespace qcsim
