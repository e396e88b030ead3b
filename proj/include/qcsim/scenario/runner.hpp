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

#include "qcsim/scenario/scenario.hpp"

#include <iosfwd>
#include <memory>

namespace qcsim::scenario {

/// Counter agreement sampled after synchronization.
struct HoldCheck {
  std::size_t samples = 0;
  SimTime from;
  SimTime to;
  std::int64_t max_pairwise_difference = 0;
};

/// Everything one scenario run produced.
struct Outcome {
  std::unique_ptr<control::Testbed> bed;
  ptp::SyncReport sync;
  std::optional<control::JobReport> job;
  HoldCheck hold;
};

/// Builds the testbed, synchronizes and runs the job (if any). Throws on any
/// module error.
Outcome execute(const Scenario& s);

/// Max pairwise counter difference at `samples` evenly spaced ticks in [from, to].
HoldCheck sample_counters(const Cluster& cluster, SimTime from, SimTime to, std::size_t samples);

/// Schedules `samples` engine events in [from, to] that record the counter
/// spread into `out` as the run reaches them. `cluster` and `out` must outlive
/// the events.
void probe_counters(Engine& engine, const Cluster& cluster, SimTime from, SimTime to, std::size_t samples,
                    HoldCheck& out);

void write_trace(const EventTrace& trace, std::ostream& out);
void write_pulses_csv(const std::vector<control::PulseRecord>& pulses, std::ostream& out);
std::string render_report(const Scenario& s, const Outcome& o);
std::string sync_check(const Scenario& s);
std::string throughput_table(const Scenario& s);

/// Runs the scenario and writes trace.jsonl, pulses.csv and report.txt into
/// out_dir. Returns 0, or 1 after printing a diagnostic to `diag`.
int run(const Scenario& s, const std::filesystem::path& out_dir, std::ostream& diag);

}  // namespace qcsim::scenario
