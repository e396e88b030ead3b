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

#include "qcsim/control/testbed.hpp"

#include <fmt/format.h>

// Boost distributions give the same sequence on every standard library.
#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace qcsim::control {

Testbed::Testbed(TestbedConfig config)
    : config_(std::move(config)),
      emulator_(config_.scripts, config_.demodulation_delay),
      rng_(config_.seed) {
  for (const BoardSpec& b : config_.boards) {
    cluster_.add(Board(b.id, ClockDomain(b.clock, b.phase, b.drift_ppm, b.counter_offset)));
  }
  if (!config_.ring.order.empty()) {
    config_.ring.validate(cluster_);
    config_.ring.wire(cluster_);
  }

  if (config_.star) {
    const fsm::StarTopology& star = *config_.star;
    star.validate(cluster_);
    readout_ = std::make_unique<fsm::ReadoutFsm>(engine_, star.root, config_.readout_qubits, config_.broadcast_gap);
    for (BoardId leaf : star.leaves) {
      const int root_lane = cluster_.board(star.root).add_lane();
      cluster_.board(leaf).add_lane();
      auto lane = std::make_unique<link::DuplexLane>(engine_, config_.lane, config_.schedule, root_lane, star.root, leaf);
      auto ff = std::make_unique<fsm::FeedForwardFsm>(engine_, leaf);
      fsm::FeedForwardFsm* sink = ff.get();
      lane->a_to_b.connect([this, sink](const link::LinkFrame& f, const link::Delivery&) {
        sink->ff_store(f, engine_.now());
      });
      if (config_.bit_flip_probability > 0) {
        lane->a_to_b.set_fault_injector([this](link::LinkFrame& f) {
          boost::random::bernoulli_distribution<double> hit(config_.bit_flip_probability);
          if (!hit(rng_)) return;
          boost::random::uniform_int_distribution<std::size_t> pick(0, f.bit_count() - 1);
          f = link::corrupt(std::move(f), pick(rng_));
          ++injected_faults_;
        });
      }
      readout_->attach_lane(lane->a_to_b);
      leaves_.emplace(leaf, std::move(ff));
      lanes_.push_back(std::move(lane));
    }
  }

  for (BoardId id : cluster_.ids()) {
    BoardContext ctx;
    ctx.emulator = &emulator_;
    ctx.bit_to_qubit = &bit_map_;
    if (config_.star && config_.star->root == id) ctx.readout = readout_.get();
    if (auto it = leaves_.find(id); it != leaves_.end()) ctx.feed_forward = it->second.get();
    interpreters_.emplace(id, std::make_unique<BoardInterpreter>(engine_, cluster_.board(id), ctx));
  }
}

fsm::FeedForwardFsm* Testbed::feed_forward(BoardId leaf) {
  const auto it = leaves_.find(leaf);
  return it == leaves_.end() ? nullptr : it->second.get();
}

BoardInterpreter& Testbed::interpreter(BoardId board) {
  const auto it = interpreters_.find(board);
  if (it == interpreters_.end()) throw UnknownBoard(fmt::format("board {} is not registered", board));
  return *it->second;
}

}  // namespace qcsim::control
