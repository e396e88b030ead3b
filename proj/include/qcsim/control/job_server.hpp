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
 * @file job_server.hpp
 * @brief Central job server: synchronizes the ring, uploads binaries and
 * broadcasts a start counter value.
 *
 * Calls into boards are plain function calls made between events, so they
 * take no simulated time. A start value is a control-clock counter reading;
 * each board starts when its own corrected counter reaches it.
 */

#pragma once

#include "qcsim/control/testbed.hpp"

#include <map>
#include <optional>
#include <set>
#include <vector>

namespace qcsim::control {

class NotSynchronized : public Error {
 public:
  using Error::Error;
};

class StartInPast : public NotSynchronized {
 public:
  using NotSynchronized::NotSynchronized;
};

class MissingBinary : public Error {
 public:
  using Error::Error;
};

struct JobOptions {
  unsigned shots = 1;
  SimTime start_lead{165'000};     // 2 us from "now" to the first start
  SimTime shot_period{825'000};    // 10 us between shot starts
  std::optional<SimTime> t_stop;   // run to quiescence when unset
};

struct StartRecord {
  unsigned shot = 0;
  BoardId board = -1;
  std::int64_t counter = 0;
  SimTime t;
};

/// Fresh-data check for one feed-forward branch.
struct ArrivalCheck {
  unsigned shot = 0;
  BoardId leaf = -1;
  unsigned qubit = 0;
  unsigned bit = 0;
  SimTime measure_end;
  SimTime available;               // measure_end + demodulation
  std::optional<SimTime> delivered;  // stored in the leaf register
  SimTime hold_expiry;             // when the branch read the register
  bool ok = false;                 // delivered <= hold_expiry

  std::optional<SimTime> link_latency() const {
    return delivered ? std::optional<SimTime>(*delivered - available) : std::nullopt;
  }
};

struct ShotSummary {
  unsigned shot = 0;
  BoardId board = -1;
  std::optional<SimTime> start_pulse;        // first unconditional pulse
  std::optional<SimTime> first_conditional;  // first pulse after a branch
  std::vector<Rational> conditional_amplitudes;

  std::optional<SimTime> interval() const {
    if (!start_pulse || !first_conditional) return std::nullopt;
    return *first_conditional - *start_pulse;
  }
};

struct JobReport {
  ptp::SyncReport sync;
  std::vector<StartRecord> starts;
  std::vector<PulseRecord> pulses;
  std::vector<MeasureRecord> measures;
  std::vector<BranchRecord> branches;
  std::vector<ArrivalCheck> arrivals;
  std::vector<ShotSummary> shots;
  std::vector<fsm::FrameTransmission> frames;
  std::size_t overwrite_attempts = 0;
  std::size_t dropped_frames = 0;
  std::size_t injected_faults = 0;
  std::size_t warnings = 0;
  SimTime finished;

  bool arrival_ok() const;
  /// True when, in every shot, all targets started at the same global tick.
  bool parallel_start() const;
};

class JobServer {
 public:
  explicit JobServer(Testbed& bed) : bed_(&bed) {}

  /// Boot-time ring synchronization. With a resync period configured, rounds
  /// repeat until `resync_until`.
  ptp::SyncReport synchronize(std::optional<SimTime> resync_until = std::nullopt);
  bool synchronized() const { return synchronized_; }

  /// Stages a binary on its board, replacing any earlier one. Throws UnknownBoard.
  void upload(BoardBinary binary);

  /// Boards a start is sent to: the star members plus every board with a binary.
  std::vector<BoardId> targets() const;

  /// Schedules every target to begin instruction 0 when its counter reaches
  /// t_start. A start whose counter was pulled back by a later correction is
  /// deferred until the counter gets there. Returns the projected start times.
  /// Throws NotSynchronized, StartInPast, MissingBinary.
  std::vector<StartRecord> broadcast_start(std::int64_t t_start, unsigned shot = 0);

  /// Sync (if needed), upload, start every shot, run, and collect the report.
  JobReport run_job(std::vector<BoardBinary> binaries, const JobOptions& options = {});

  const std::optional<ptp::SyncReport>& last_sync() const { return sync_; }

 private:
  void arm_start(BoardId board, unsigned shot, std::int64_t counter, SimTime at);

  Testbed* bed_;
  bool synchronized_ = false;
  std::optional<ptp::SyncReport> sync_;
  std::set<BoardId> uploaded_;
  std::map<std::pair<unsigned, BoardId>, SimTime> started_;
};

}  // namespace qcsim::control
