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

#include "qcsim/control/emulator.hpp"
#include "qcsim/control/interpreter.hpp"
#include "qcsim/fsm/star.hpp"
#include "qcsim/ptp/ring.hpp"

#include <map>
#include <memory>
#include <optional>
#include <random>
#include <vector>

namespace qcsim::control {

struct BoardSpec {
  BoardId id = -1;
  Frequency clock = kControlClock;
  SimTime phase{};
  Rational drift_ppm{0};
  std::int64_t counter_offset = 0;  // initial counter correction (unsynchronized)
};

struct TestbedConfig {
  std::vector<BoardSpec> boards;
  ptp::RingTopology ring;
  ptp::ExchangeOptions ptp;
  std::optional<SimTime> resync_period;  // off unless set
  std::optional<fsm::StarTopology> star;
  link::LaneConfig lane;
  link::LaneSchedule schedule;
  SimTime broadcast_gap = fsm::kDefaultBroadcastGap;
  unsigned readout_qubits = 21;
  SimTime demodulation_delay = kDefaultDemodulationDelay;
  std::map<unsigned, std::vector<std::uint8_t>> scripts;
  double bit_flip_probability = 0.0;  // per frame, injected on root lanes
  std::uint64_t seed = 1;
};

/// Owns one simulated cluster: engine, boards, sync ring, star lanes, FSMs,
/// emulator and one interpreter per board.
class Testbed {
 public:
  explicit Testbed(TestbedConfig config);
  Testbed(const Testbed&) = delete;
  Testbed& operator=(const Testbed&) = delete;

  Engine& engine() { return engine_; }
  Cluster& cluster() { return cluster_; }
  const TestbedConfig& config() const { return config_; }
  ReadoutEmulator& emulator() { return emulator_; }

  fsm::ReadoutFsm* readout() { return readout_.get(); }
  fsm::FeedForwardFsm* feed_forward(BoardId leaf);
  BoardInterpreter& interpreter(BoardId board);
  const std::vector<std::unique_ptr<link::DuplexLane>>& lanes() const { return lanes_; }

  /// Classical bit -> qubit, from every Measure in the uploaded binaries.
  std::map<unsigned, unsigned>& bit_map() { return bit_map_; }

  std::size_t injected_faults() const { return injected_faults_; }

 private:
  TestbedConfig config_;
  Engine engine_;
  Cluster cluster_;
  ReadoutEmulator emulator_;
  std::unique_ptr<fsm::ReadoutFsm> readout_;
  std::map<BoardId, std::unique_ptr<fsm::FeedForwardFsm>> leaves_;
  std::vector<std::unique_ptr<link::DuplexLane>> lanes_;
  std::map<BoardId, std::unique_ptr<BoardInterpreter>> interpreters_;
  std::map<unsigned, unsigned> bit_map_;
  std::mt19937_64 rng_;
  std::size_t injected_faults_ = 0;
};

}  // namespace qcsim::control
