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

#include "qcsim/control/job_server.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace qcsim::control {

bool JobReport::arrival_ok() const {
  return std::all_of(arrivals.begin(), arrivals.end(), [](const ArrivalCheck& a) { return a.ok; });
}

bool JobReport::parallel_start() const {
  std::map<unsigned, std::set<std::uint64_t>> per_shot;
  for (const StartRecord& s : starts) per_shot[s.shot].insert(s.t.ticks);
  return std::all_of(per_shot.begin(), per_shot.end(), [](const auto& kv) { return kv.second.size() == 1; });
}

ptp::SyncReport JobServer::synchronize(std::optional<SimTime> resync_until) {
  Testbed& bed = *bed_;
  const TestbedConfig& cfg = bed.config();
  if (cfg.ring.order.empty()) throw ptp::RingOpen("no sync ring configured");
  sync_ = ptp::ring_synchronize(bed.engine(), bed.cluster(), cfg.ring, cfg.ptp);
  synchronized_ = true;
  if (cfg.resync_period && resync_until) {
    const SimTime first = bed.engine().now() + *cfg.resync_period;
    ptp::schedule_periodic_resync(bed.engine(), bed.cluster(), cfg.ring, first, *cfg.resync_period, *resync_until,
                                  [this](const ptp::SyncReport& r) { sync_ = r; }, cfg.ptp);
  }
  return *sync_;
}

void JobServer::upload(BoardBinary binary) {
  const BoardId id = binary.board;
  if (!bed_->cluster().contains(id)) throw UnknownBoard(fmt::format("upload: board {} is not registered", id));
  bed_->interpreter(id).load(std::move(binary));
  uploaded_.insert(id);
  bed_->engine().log("job.upload", Target{id, -1},
                     Json{{"instructions", bed_->interpreter(id).binary().instructions.size()}});
}

std::vector<BoardId> JobServer::targets() const {
  std::set<BoardId> out(uploaded_.begin(), uploaded_.end());
  if (const auto& star = bed_->config().star) {
    out.insert(star->root);
    out.insert(star->leaves.begin(), star->leaves.end());
  }
  return {out.begin(), out.end()};
}

std::vector<StartRecord> JobServer::broadcast_start(std::int64_t t_start, unsigned shot) {
  if (!synchronized_) throw NotSynchronized("start requested before ring synchronization");
  Testbed& bed = *bed_;
  Engine& engine = bed.engine();
  const auto boards = targets();
  for (BoardId id : boards) {
    if (!bed.interpreter(id).loaded()) throw MissingBinary(fmt::format("board {} has no binary", id));
  }
  std::vector<StartRecord> out;
  for (BoardId id : boards) {
    const ClockDomain& clk = bed.cluster().board(id).control_clock();
    const SimTime at = clk.time_of_count(t_start);
    if (at < engine.now()) {
      throw StartInPast(fmt::format("start counter {} already passed on board {} (counter now {})", t_start, id,
                                    clk.counter_at(engine.now())));
    }
    out.push_back(StartRecord{shot, id, t_start, at});
  }
  for (const StartRecord& s : out) arm_start(s.board, shot, t_start, s.t);
  engine.log("job.start", Target{}, Json{{"shot", shot}, {"counter", t_start}, {"boards", boards}});
  return out;
}

void JobServer::arm_start(BoardId board, unsigned shot, std::int64_t counter, SimTime at) {
  Testbed& bed = *bed_;
  bed.engine().schedule(at, "ctl.start", Target{board, -1}, [this, &bed, board, shot, counter] {
    Engine& engine = bed.engine();
    const ClockDomain& clk = bed.cluster().board(board).control_clock();
    const std::int64_t reached = clk.counter_at(engine.now());
    engine.annotate("board_counter", reached);
    if (reached < counter) {
      const SimTime later = clk.time_of_count(counter);
      engine.annotate("deferred_to_ticks", later.ticks);
      arm_start(board, shot, counter, later);
      return;
    }
    if (fsm::FeedForwardFsm* ff = bed.feed_forward(board)) ff->clear();
    if (bed.readout() && bed.config().star->root == board) bed.readout()->reset();
    started_[{shot, board}] = engine.now();
    bed.interpreter(board).start(shot);
  },
                        Json{{"shot", shot}, {"counter", counter}});
}

JobReport JobServer::run_job(std::vector<BoardBinary> binaries, const JobOptions& options) {
  Testbed& bed = *bed_;
  Engine& engine = bed.engine();
  if (options.shots == 0) throw std::invalid_argument("job needs at least one shot");

  if (!synchronized_) synchronize();

  auto& bits = bed.bit_map();
  for (const BoardBinary& bin : binaries) {
    for (const Instruction& ins : bin.instructions) {
      if (const auto* m = std::get_if<Measure>(&ins)) {
        const auto [it, fresh] = bits.emplace(m->dest, m->qubit);
        if (!fresh && it->second != m->qubit) {
          throw std::invalid_argument(fmt::format("c{} is the destination of both q{} and q{}", m->dest,
                                                  it->second, m->qubit));
        }
      }
    }
  }
  for (BoardBinary& bin : binaries) upload(std::move(bin));

  const auto boards = targets();
  const BoardId reference = bed.config().ring.order.empty() ? boards.front() : bed.config().ring.order.front();
  const ClockDomain& ref_clock = bed.cluster().board(reference).control_clock();
  const std::uint64_t period = ref_clock.nominal_frequency().period().ticks;
  const auto cycles_of = [period](SimTime d) { return static_cast<std::int64_t>((d.ticks + period - 1) / period); };
  const std::int64_t first = ref_clock.counter_at(engine.now()) + cycles_of(options.start_lead);

  JobReport report;
  report.sync = *sync_;
  for (unsigned shot = 0; shot < options.shots; ++shot) {
    auto starts = broadcast_start(first + static_cast<std::int64_t>(shot) * cycles_of(options.shot_period), shot);
    report.starts.insert(report.starts.end(), starts.begin(), starts.end());
  }

  if (bed.config().resync_period) {
    const SimTime until = options.t_stop ? *options.t_stop : report.starts.back().t + options.shot_period;
    const SimTime p = *bed.config().resync_period;
    ptp::schedule_periodic_resync(engine, bed.cluster(), bed.config().ring, engine.now() + p, p, until,
                                  [this](const ptp::SyncReport& r) { sync_ = r; }, bed.config().ptp);
  }

  if (options.t_stop) {
    engine.run_until(*options.t_stop);
  } else {
    while (engine.step()) {
    }
  }
  report.finished = engine.now();
  for (StartRecord& s : report.starts) {
    if (const auto it = started_.find({s.shot, s.board}); it != started_.end()) s.t = it->second;
  }

  for (BoardId id : boards) {
    const BoardInterpreter& in = bed.interpreter(id);
    report.pulses.insert(report.pulses.end(), in.pulses().begin(), in.pulses().end());
    report.measures.insert(report.measures.end(), in.measures().begin(), in.measures().end());
    report.branches.insert(report.branches.end(), in.branches().begin(), in.branches().end());
    report.warnings += in.warnings();
    if (const fsm::FeedForwardFsm* ff = bed.feed_forward(id)) report.dropped_frames += ff->dropped_frames();
  }
  if (const fsm::ReadoutFsm* root = bed.readout()) {
    report.frames = root->transmissions();
    report.overwrite_attempts = root->overwrite_attempts();
  }
  report.injected_faults = bed.injected_faults();

  for (const BranchRecord& b : report.branches) {
    if (b.source == BitSource::Local || !b.qubit || !bed.feed_forward(b.board)) continue;
    const auto m = std::find_if(report.measures.begin(), report.measures.end(), [&](const MeasureRecord& r) {
      return r.shot == b.shot && r.qubit == *b.qubit;
    });
    if (m == report.measures.end()) continue;
    ArrivalCheck a;
    a.shot = b.shot;
    a.leaf = b.board;
    a.qubit = *b.qubit;
    a.bit = b.bit;
    a.measure_end = m->t_end;
    a.available = m->available;
    a.delivered = b.source == BitSource::FeedForward ? b.data_updated : std::nullopt;
    a.hold_expiry = b.t;
    a.ok = a.delivered && *a.delivered <= a.hold_expiry && *a.delivered >= a.available;
    const bool seen = std::any_of(report.arrivals.begin(), report.arrivals.end(), [&](const ArrivalCheck& x) {
      return x.shot == a.shot && x.leaf == a.leaf && x.qubit == a.qubit;
    });
    if (!seen) report.arrivals.push_back(a);
  }

  std::map<std::pair<unsigned, BoardId>, ShotSummary> summaries;
  for (const PulseRecord& p : report.pulses) {
    ShotSummary& s = summaries[{p.shot, p.board}];
    s.shot = p.shot;
    s.board = p.board;
    if (p.conditional) {
      if (!s.first_conditional) s.first_conditional = p.t_start;
      s.conditional_amplitudes.push_back(p.amplitude_v);
    } else if (!s.start_pulse) {
      s.start_pulse = p.t_start;
    }
  }
  for (auto& [key, s] : summaries) report.shots.push_back(std::move(s));
  return report;
}

}  // namespace qcsim::control
