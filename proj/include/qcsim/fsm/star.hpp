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

#include "qcsim/core/board.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcsim::fsm {

/// Root board hosting the readout FSM, fanned out to leaf boards hosting
/// feed-forward FSMs, one root lane per leaf.
struct StarTopology {
  BoardId root = -1;
  std::vector<BoardId> leaves;

  bool is_leaf(BoardId b) const { return std::find(leaves.begin(), leaves.end(), b) != leaves.end(); }

  void validate(const Cluster& cluster) const {
    (void)cluster.board(root);
    if (leaves.size() > kMaxLanesPerBoard) {
      throw std::invalid_argument("star root has " + std::to_string(leaves.size()) + " leaves; at most 4 lanes");
    }
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      (void)cluster.board(leaves[i]);
      if (leaves[i] == root) throw std::invalid_argument("star root cannot be its own leaf");
      if (std::count(leaves.begin(), leaves.end(), leaves[i]) > 1) {
        throw std::invalid_argument("duplicate star leaf " + std::to_string(leaves[i]));
      }
    }
  }
};

}  // namespace qcsim::fsm
