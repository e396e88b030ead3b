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

#include "qcsim/scenario/runner.hpp"

#include "qcsim/link/throughput.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <climits>
#include <fstream>
#include <map>
#include <ostream>

namespace qcsim::scenario {
namespace {

namespace fs = std::filesystem;

std::string ns(SimTime t) { return format_ns(t, 3); }

std::string half(const ptp::HalfCycles& h) {
  if (h.half == 0) return fmt::format("{}", h.whole);
  return fmt::format("{} ({}0.5 residual)", h.whole, h.half > 0 ? "+" : "-");
}

std::string volts(const std::vector<Rational>& amps) {
  std::vector<std::string> parts;
  for (const Rational& a : amps) parts.push_back(to_decimal(a) + "V");
  return "{" + fmt::format("{}", fmt::join(parts, ", ")) + "}";
}

void render_sync(std::string& out, const ptp::SyncReport& sync) {
  out += fmt::format("clock synchronization (round {})\n", sync.round);
  for (const ptp::SyncRecord& r : sync.records) {
    out += fmt::format("  board {} -> {}: offset {} cycles, transit {} cycles, counter adjusted by {:+}\n", r.primary,
                       r.secondary, half(r.offset), half(r.transit), -r.applied);
  }
  if (sync.closing) {
    out += fmt::format("  closing link {} -> {} (verification only): offset {} cycles, transit {} cycles\n",
                       sync.closing->primary, sync.closing->secondary, half(sync.closing->offset),
                       half(sync.closing->transit));
  }
}

std::int64_t spread(const Cluster& cluster, SimTime t) {
  std::int64_t lo = INT64_MAX, hi = INT64_MIN;
  for (BoardId id : cluster.ids()) {
    const std::int64_t c = cluster.board(id).control_clock().counter_at(t);
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  return hi - lo;
}

SimTime sample_time(SimTime from, SimTime to, std::size_t samples, std::size_t i) {
  return SimTime{from.ticks + (samples > 1 ? (to.ticks - from.ticks) / (samples - 1) * i : 0)};
}

}  // namespace

HoldCheck sample_counters(const Cluster& cluster, SimTime from, SimTime to, std::size_t samples) {
  HoldCheck h;
  h.from = from;
  h.to = to;
  h.samples = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    h.max_pairwise_difference = std::max(h.max_pairwise_difference, spread(cluster, sample_time(from, to, samples, i)));
  }
  return h;
}

void probe_counters(Engine& engine, const Cluster& cluster, SimTime from, SimTime to, std::size_t samples,
                    HoldCheck& out) {
  out = HoldCheck{samples, from, to, 0};
  for (std::size_t i = 0; i < samples; ++i) {
    engine.schedule(sample_time(from, to, samples, i), "sync.probe", Target{}, [&engine, &cluster, &out] {
      const std::int64_t d = spread(cluster, engine.now());
      engine.annotate("max_pairwise_difference", d);
      out.max_pairwise_difference = std::max(out.max_pairwise_difference, d);
    });
  }
}

Outcome execute(const Scenario& s) {
  Outcome o;
  o.bed = std::make_unique<control::Testbed>(s.testbed);
  control::JobServer server(*o.bed);
  Engine& engine = o.bed->engine();
  const bool ring = !s.testbed.ring.order.empty();
  if (ring) {
    o.sync = server.synchronize(s.has_program() ? std::nullopt : s.t_stop);
  }
  const SimTime synced_at = engine.now();
  // Later corrections rewrite counter_at() for past instants, so with resync
  // the counters are sampled while the run is in progress.
  const bool live_probe = ring && s.testbed.resync_period.has_value();
  if (live_probe) {
    SimTime horizon = s.t_stop.value_or(synced_at);
    if (!s.t_stop && s.has_program()) horizon = synced_at + s.job.start_lead + s.job.shot_period * s.job.shots;
    probe_counters(engine, o.bed->cluster(), synced_at, std::max(horizon, synced_at), 100, o.hold);
  }
  if (s.has_program()) {
    o.job = server.run_job(s.binaries, s.job);
    if (server.last_sync()) o.sync = *server.last_sync();
  } else if (s.t_stop) {
    engine.run_until(std::max(*s.t_stop, engine.now()));
    if (server.last_sync()) o.sync = *server.last_sync();
  }
  if (live_probe) engine.run_until(std::max(engine.now(), o.hold.to));
  if (ring && !live_probe) {
    const SimTime horizon = std::max(engine.now(), s.t_stop.value_or(engine.now()));
    o.hold = sample_counters(o.bed->cluster(), synced_at, horizon, 100);
  }
  return o;
}

void write_trace(const EventTrace& trace, std::ostream& out) {
  for (const TraceRecord& r : trace) out << to_json(r).dump() << '\n';
}

void write_pulses_csv(const std::vector<control::PulseRecord>& pulses, std::ostream& out) {
  out << "board,t_start_ns,length_ns,amplitude_V,frequency_GHz\n";
  for (const control::PulseRecord& p : pulses) {
    out << fmt::format("{},{},{},{},{}\n", p.board, format_ns(p.t_start), format_ns(p.length),
                       to_decimal(p.amplitude_v), to_decimal(p.frequency_hz / 1'000'000'000));
  }
}

std::string render_report(const Scenario& s, const Outcome& o) {
  std::string out;
  out += fmt::format("scenario {} (seed {})\n", s.name, s.seed);
  out += fmt::format("boards {}, simulated until {} ns ({} ticks)\n\n", s.testbed.boards.size(),
                     ns(o.bed->engine().now()), o.bed->engine().now().ticks);

  if (!s.testbed.ring.order.empty()) {
    render_sync(out, o.sync);
    out += fmt::format("  post-sync hold: max pairwise counter difference {} over {} samples in [{}, {}] ns\n\n",
                       o.hold.max_pairwise_difference, o.hold.samples, ns(o.hold.from), ns(o.hold.to));
  }

  if (s.testbed.star) {
    const link::LaneConfig& l = s.testbed.lane;
    const SimTime cyc = l.user_cycle();
    const SimTime tx = cyc * l.tx_cdc_latency_cycles, rx = cyc * l.rx_cdc_latency_cycles;
    out += "link latency breakdown (1-word frame submitted on a data cycle)\n";
    out += fmt::format("  tx CDC FIFO     {:>10} ns ({} user cycles)\n", ns(tx), l.tx_cdc_latency_cycles);
    out += fmt::format("  serialization   {:>10} ns (1 user cycle)\n", ns(cyc));
    out += fmt::format("  fiber           {:>10} ns\n", ns(l.fiber_delay));
    out += fmt::format("  rx CDC FIFO     {:>10} ns ({} user cycles)\n", ns(rx), l.rx_cdc_latency_cycles);
    out += fmt::format("  total           {:>10} ns (+ up to 2 user cycles for edge alignment and pauses)\n",
                       ns(tx + cyc + l.fiber_delay + rx));
    std::optional<SimTime> lo, hi;
    for (const auto& lane : o.bed->lanes()) {
      for (const link::Delivery& d : lane->a_to_b.deliveries()) {
        lo = lo ? std::min(*lo, d.latency()) : d.latency();
        hi = hi ? std::max(*hi, d.latency()) : d.latency();
      }
    }
    if (lo) out += fmt::format("  observed        {} .. {} ns\n", ns(*lo), ns(*hi));
    out += '\n';
  }

  if (o.job) {
    const control::JobReport& j = *o.job;
    out += "readout / feed-forward FSMs\n";
    out += fmt::format("  frames broadcast {}, overwrite attempts {}, frames dropped (CRC) {}, faults injected {}\n",
                       j.frames.size(), j.overwrite_attempts, j.dropped_frames, j.injected_faults);
    std::optional<SimTime> min_gap;
    for (std::size_t i = 1; i < j.frames.size(); ++i) {
      const SimTime g = j.frames[i].t - j.frames[i - 1].t;
      min_gap = min_gap ? std::min(*min_gap, g) : g;
    }
    if (min_gap) {
      out += fmt::format("  min frame spacing {} ns (gap {} ns)\n", ns(*min_gap), ns(s.testbed.broadcast_gap));
    }
    out += '\n';

    std::map<unsigned, std::pair<SimTime, SimTime>> bounds;
    for (const control::StartRecord& st : j.starts) {
      auto [it, fresh] = bounds.try_emplace(st.shot, st.t, st.t);
      it->second.first = std::min(it->second.first, st.t);
      it->second.second = std::max(it->second.second, st.t);
    }
    SimTime spread{};
    for (const auto& [shot, b] : bounds) spread = std::max(spread, b.second - b.first);
    out += fmt::format("job: {} shot(s), parallel start {} (max start spread {} ns)\n", s.job.shots,
                       j.parallel_start() ? "yes" : "no", ns(spread));
    for (const control::ShotSummary& sh : j.shots) {
      out += fmt::format("  shot {} board {}: ", sh.shot, sh.board);
      if (sh.start_pulse) out += fmt::format("start pulse at {} ns, ", ns(*sh.start_pulse));
      out += fmt::format("{} conditional pulse(s) {}", sh.conditional_amplitudes.size(),
                         volts(sh.conditional_amplitudes));
      if (const auto iv = sh.interval()) {
        out += fmt::format(", start-to-first-conditional {} ns", ns(*iv));
      }
      out += '\n';
    }
    out += '\n';

    out += fmt::format("data-arrival safety: {}\n", j.arrival_ok() ? "ok" : "VIOLATION");
    for (const control::ArrivalCheck& a : j.arrivals) {
      out += fmt::format("  shot {} q{} -> board {}: measure end {} + demod -> {} ns, ", a.shot, a.qubit, a.leaf,
                         ns(a.measure_end), ns(a.available));
      if (a.delivered) {
        out += fmt::format("delivered {} ns (link {} ns), ", ns(*a.delivered), ns(*a.link_latency()));
      } else {
        out += "never delivered, ";
      }
      out += fmt::format("hold expiry {} ns: {}\n", ns(a.hold_expiry), a.ok ? "ok" : "VIOLATION");
    }
    if (j.warnings) out += fmt::format("  {} branch(es) read unknown bits as 0\n", j.warnings);
    out += '\n';
  }

  out += "throughput\n";
  out += throughput_table(s);
  return out;
}

std::string sync_check(const Scenario& s) {
  if (s.testbed.ring.order.empty()) throw ptp::RingOpen("scenario has no sync ring");
  control::Testbed bed(s.testbed);
  control::JobServer server(bed);
  const ptp::SyncReport r = server.synchronize();
  std::string out;
  render_sync(out, r);
  out += fmt::format("  corrections: [{}]\n", fmt::join(r.corrections, ", "));
  const HoldCheck h = sample_counters(bed.cluster(), bed.engine().now(),
                                      bed.engine().now() + s.t_stop.value_or(SimTime{82'500'000}), 100);
  out += fmt::format("  max pairwise counter difference after sync: {} ({} samples)\n", h.max_pairwise_difference,
                     h.samples);
  return out;
}

std::string throughput_table(const Scenario& s) {
  return link::format_throughput(link::effective_throughput(s.testbed.lane, s.testbed.schedule));
}

int run(const Scenario& s, const fs::path& out_dir, std::ostream& diag) {
  try {
    const Outcome o = execute(s);
    fs::create_directories(out_dir);
    {
      std::ofstream f(out_dir / "trace.jsonl", std::ios::binary);
      write_trace(o.bed->engine().trace(), f);
    }
    {
      std::ofstream f(out_dir / "pulses.csv", std::ios::binary);
      write_pulses_csv(o.job ? o.job->pulses : std::vector<control::PulseRecord>{}, f);
    }
    {
      std::ofstream f(out_dir / "report.txt", std::ios::binary);
      f << render_report(s, o);
    }
    return 0;
  } catch (const std::exception& e) {
    diag << "error: " << s.name << ": " << e.what() << '\n';
    return 1;
  }
}

}  // namespace qcsim::scenario
