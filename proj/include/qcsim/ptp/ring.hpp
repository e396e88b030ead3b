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

#include "qcsim/ptp/ptp.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace qcsim::ptp {

class RingOpen : public Error {
 public:
  using Error::Error;
};

/// Boards in ring order; order[0] is the primary. links[i] connects
/// order[i] to order[(i + 1) % N], so the last link closes the ring.
struct RingTopology {
  std::vector<BoardId> order;
  std::vector<std::optional<SyncLink>> links;

  static RingTopology uniform(std::vector<BoardId> order, SyncLink link);

  /// Throws RingOpen unless there are N >= 2 boards and N links, all present.
  void validate(const Cluster& cluster) const;

  /// Records upstream/downstream neighbours on each board's sync ports.
  void wire(Cluster& cluster) const;
};

struct SyncRecord {
  BoardId primary = -1;
  BoardId secondary = -1;
  PtpExchange exchange;
  HalfCycles offset;
  HalfCycles transit;
  std::int64_t applied = 0;   // correction applied to the secondary
  bool verification = false;  // closing link: measured, never applied
  SimTime completed_at;
};

struct SyncReport {
  std::uint32_t round = 0;
  std::vector<SyncRecord> records;       // the N-1 correcting exchanges, in ring order
  std::vector<std::int64_t> corrections;  // applied[i] for records[i]
  std::optional<SyncRecord> closing;     // last board back to the primary
};

/// Asynchronous ring synchronization: exchanges order[i] -> order[i+1] in
/// turn, applying each offset to the downstream board before moving on, then
/// measures the closing link without correcting it.
void start_ring_sync(Engine& engine, Cluster& cluster, const RingTopology& ring,
                     std::function<void(const SyncReport&)> done, ExchangeOptions options = {},
                     std::uint32_t round = 0);

/// Blocking form of start_ring_sync: steps the engine until the report is ready.
SyncReport ring_synchronize(Engine& engine, Cluster& cluster, const RingTopology& ring,
                            ExchangeOptions options = {});

/// Re-runs ring synchronization every `period` from `first` while the start
/// time is <= `until`. Used for drifted-clock experiments only.
void schedule_periodic_resync(Engine& engine, Cluster& cluster, RingTopology ring, SimTime first, SimTime period,
                              SimTime until, std::function<void(const SyncReport&)> on_round,
                              ExchangeOptions options = {});

Json to_json(const SyncRecord& r);

}  // namespace qcsim::ptp
