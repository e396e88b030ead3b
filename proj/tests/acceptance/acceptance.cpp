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

// Acceptance gate: one line per criterion, non-zero exit if any fails.

#include "qcsim/frame/readout_frame.hpp"
#include "qcsim/link/crc32.hpp"
#include "qcsim/link/throughput.hpp"
#include "qcsim/ptp/ring.hpp"
#include "qcsim/scenario/runner.hpp"

#include <boost/crc.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

using namespace qcsim;
namespace fs = std::filesystem;

namespace {

using BigRational = boost::multiprecision::cpp_rational;

constexpr std::uint64_t kCycle = 165;  // 500 MHz in 82.5 GHz ticks
const fs::path kDir{QCSIM_SCENARIO_DIR};

struct Verdict {
  bool pass = true;
  std::string detail;
};

// Records the first failure; later ones only bump the count.
struct Check {
  bool ok = true;
  std::size_t failures = 0;
  std::string first;

  void expect(bool cond, const std::string& what) {
    if (cond) return;
    if (ok) first = what;
    ok = false;
    ++failures;
  }
  Verdict verdict(const std::string& summary) const {
    if (ok) return {true, summary};
    return {false, fmt::format("{} failure(s); first: {}", failures, first)};
  }
};

BigRational big(const Rational& r) { return BigRational(r.numerator(), r.denominator()); }

SimTime ns(std::uint64_t n) { return SimTime{n * 165 / 2}; }  // exact for even n

std::string trace_bytes(const EventTrace& trace) {
  std::ostringstream out;
  scenario::write_trace(trace, out);
  return out.str();
}

// ---------------------------------------------------------------------------

Verdict ac1_ptp_exactness() {
  Check c;
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::int64_t> offset_d(-1'000'000, 1'000'000);
  std::uniform_int_distribution<std::uint64_t> delay_d(0, 10'000);
  for (int i = 0; i < 10'000; ++i) {
    const std::int64_t o = offset_d(rng);
    const std::uint64_t l = delay_d(rng);
    Cluster cluster;
    Board& p = cluster.add(Board(0, ClockDomain(kControlClock)));
    Board& s = cluster.add(Board(1, ClockDomain(kControlClock, {}, Rational{0}, o)));
    Engine e;
    const ptp::SyncLink link{SimTime{l * kCycle}, SimTime{l * kCycle}};
    const ptp::PtpExchange x = ptp::perform_exchange(e, p, s, link);
    const ptp::HalfCycles off = ptp::compute_offset(x);
    const ptp::HalfCycles tr = ptp::compute_transit(x);
    c.expect(off.whole == o && off.half == 0, fmt::format("O={} L={}: offset {}+{}/2", o, l, off.whole, off.half));
    c.expect(tr.whole == static_cast<std::int64_t>(l) && tr.half == 0,
             fmt::format("O={} L={}: transit {}+{}/2", o, l, tr.whole, tr.half));
  }
  // Raw timestamp tuples, about half with an odd sum: exact value against a
  // big-rational oracle, with the recorded +-1/2 residual.
  std::size_t odd = 0;
  std::uniform_int_distribution<std::int64_t> ts(-2'000'000, 2'000'000);
  std::uniform_int_distribution<std::int64_t> turn(0, 1000);
  for (int i = 0; i < 10'000; ++i) {
    ptp::PtpExchange x;
    x.t1 = ts(rng);
    x.t2 = ts(rng);
    x.t3 = x.t2 + turn(rng);
    x.t4 = x.t1 + (x.t3 - x.t2) + static_cast<std::int64_t>(delay_d(rng));
    const BigRational exp_off = BigRational((x.t2 - x.t1) - (x.t4 - x.t3)) / 2;
    const BigRational exp_tr = BigRational((x.t4 - x.t1) - (x.t3 - x.t2)) / 2;
    const ptp::HalfCycles off = ptp::compute_offset(x), tr = ptp::compute_transit(x);
    odd += off.half != 0;
    c.expect(BigRational(off.whole) + BigRational(off.half) / 2 == exp_off, "raw offset mismatch");
    c.expect(BigRational(tr.whole) + BigRational(tr.half) / 2 == exp_tr, "raw transit mismatch");
    c.expect(big(off.exact()) == exp_off, "offset exact() mismatch");
    c.expect(off.half == 0 || (off.half > 0) == (exp_off > 0), "residual sign");
  }
  c.expect(odd > 1000, "too few odd-sum tuples generated");
  return c.verdict(fmt::format("10000 simulated exchanges exact; 10000 timestamp tuples ({} odd-sum) exact", odd));
}

Verdict ac2_ring_convergence() {
  Check c;
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::int64_t> offset_d(-1'000'000, 1'000'000);
  std::uniform_int_distribution<std::uint64_t> delay_d(0, 10'000);  // ticks, sub-cycle and multi-cycle
  for (std::size_t n : {2u, 3u, 4u, 8u}) {
    Cluster cluster;
    std::vector<BoardId> order;
    std::vector<std::int64_t> initial;
    for (std::size_t i = 0; i < n; ++i) {
      const std::int64_t off = offset_d(rng);
      initial.push_back(off);
      cluster.add(Board(static_cast<BoardId>(10 + i), ClockDomain(kControlClock, {}, Rational{0}, off)));
      order.push_back(static_cast<BoardId>(10 + i));
    }
    ptp::RingTopology ring;
    ring.order = order;
    for (std::size_t i = 0; i < n; ++i) {
      const SimTime d{delay_d(rng)};
      ring.links.push_back(ptp::SyncLink{d, d});
    }
    Engine engine;
    const ptp::SyncReport r = ptp::ring_synchronize(engine, cluster, ring);
    const SimTime t0 = engine.now();

    // Oracle: phase-aligned drift-free counters are floor(t / period) plus the
    // correction. Each hop is measured against an already-corrected upstream
    // board, so board i's correction is its own initial offset from the primary.
    for (std::size_t i = 1; i < n; ++i) {
      c.expect(r.corrections[i - 1] == initial[i] - initial[0],
               fmt::format("N={} hop {}: correction {} != {}", n, i, r.corrections[i - 1], initial[i] - initial[0]));
    }

    scenario::HoldCheck hold_10ms, hold_1s;
    scenario::probe_counters(engine, cluster, t0, t0 + ns(10'000'000), 100, hold_10ms);
    engine.run_until(t0 + ns(10'000'000));
    c.expect(hold_10ms.max_pairwise_difference == 0,
             fmt::format("N={} 10 ms: max difference {}", n, hold_10ms.max_pairwise_difference));
    const SimTime t1 = engine.now();
    scenario::probe_counters(engine, cluster, t1, t1 + ns(1'000'000'000), 100, hold_1s);
    engine.run_until(t1 + ns(1'000'000'000));
    c.expect(hold_1s.max_pairwise_difference == 0,
             fmt::format("N={} 1 s: max difference {}", n, hold_1s.max_pairwise_difference));
    for (const BoardId id : order) {
      const std::int64_t expect = static_cast<std::int64_t>(engine.now().ticks / kCycle) + initial[0];
      c.expect(cluster.board(id).control_clock().counter_at(engine.now()) == expect,
               fmt::format("N={} board {} counter off the oracle", n, id));
    }
  }
  return c.verdict("N in {2,3,4,8}: 0 difference at 100 samples over 10 ms and 100 samples over a further 1 s");
}

Verdict ac3_throughput() {
  Check c;
  const link::Throughput t = link::effective_throughput(link::LaneConfig{}, link::LaneSchedule{});
  const BigRational line(10'312'500'000);
  c.expect(big(t.encoding_overhead) == BigRational(2, 66), "overhead != 2/66");
  c.expect(big(t.payload_ceiling) == line * 64 / 66, "ceiling != line * 64/66");
  c.expect(big(t.payload_ceiling) == BigRational(10'000'000'000), "ceiling != 10 Gb/s");
  c.expect(big(t.with_compensation) == BigRational(10'000'000'000) * 4984 / 4992, "compensated != 10e9*4984/4992");
  c.expect(to_decimal(t.encoding_overhead * 100, 2) == "3.03", "overhead does not print as 3.03 %");
  return c.verdict(fmt::format("overhead {} = {} %, ceiling {} b/s, with compensation {} b/s",
                               to_decimal(t.encoding_overhead, 8), to_decimal(t.encoding_overhead * 100, 2),
                               to_decimal(t.payload_ceiling), to_decimal(t.with_compensation, 3)));
}

// Independent packer: slot i at bits 3i..3i+2, valid bit on top.
std::uint64_t oracle_pack(const std::vector<frame::QubitResult>& rs) {
  std::uint64_t w = 0;
  for (const auto& r : rs) {
    if (r.valid) w |= (std::uint64_t{r.state} | 4u) << (3 * r.index);
  }
  return w;
}

Verdict ac4_codec() {
  Check c;
  std::mt19937_64 rng(4);
  for (int i = 0; i < 10'000; ++i) {
    std::vector<frame::QubitResult> rs;
    std::vector<frame::QubitResult> valid;
    for (unsigned q = 0; q < frame::kSlotsPerFrame; ++q) {
      const auto roll = rng() % 3;
      if (roll == 0) continue;
      frame::QubitResult r{q, static_cast<std::uint8_t>(rng() % 4), roll == 1};
      rs.push_back(r);
      if (r.valid) valid.push_back(r);
    }
    std::shuffle(rs.begin(), rs.end(), rng);
    const std::uint64_t w = frame::encode(rs);
    c.expect(w == oracle_pack(rs), fmt::format("case {}: {} vs oracle {}", i, frame::to_hex(w),
                                               frame::to_hex(oracle_pack(rs))));
    c.expect((w & frame::kSpareBit) == 0, "spare bit set");
    c.expect(frame::decode(w) == valid, fmt::format("case {}: round trip mismatch", i));
  }
  std::vector<frame::QubitResult> full;
  for (unsigned q = 0; q < 21; ++q) full.push_back({q, 3, true});
  const std::uint64_t w = frame::encode(full);
  c.expect(w == ~frame::kSpareBit, "21-qubit frame does not fill bits 0..62");
  c.expect(frame::decode(w).size() == 21, "21-qubit frame does not decode to 21 results");
  bool rejected = false;
  try {
    frame::encode(std::vector<frame::QubitResult>{{21, 0, true}});
  } catch (const IndexOutOfRange&) {
    rejected = true;
  }
  c.expect(rejected, "slot 21 accepted");
  return c.verdict("10000 random result sets round-trip; 21-qubit frame = 0x7fffffffffffffff, spare bit 0");
}

Verdict ac5_broadcast_gap() {
  Check c;
  std::size_t pairs = 0, tight = 0;
  auto inspect = [&](const std::string& name, const EventTrace& trace) {
    std::optional<SimTime> last;
    for (const TraceRecord& r : trace) {
      if (r.kind != "fsm.frame_tx") continue;
      if (last) {
        ++pairs;
        const std::uint64_t gap = r.t.ticks - last->ticks;
        tight += gap == 2640;
        c.expect(gap >= 2640, fmt::format("{}: frames {} ticks apart at {}", name, gap, r.t.ticks));
      }
      last = r.t;
    }
  };
  for (const char* name : {"listing1.scenario", "listing1_matrix.scenario", "listing1_drift.scenario"}) {
    const scenario::Outcome o = scenario::execute(scenario::load_scenario(kDir / name));
    inspect(name, o.bed->engine().trace());
  }
  // Results 4 ns apart force the second frame to wait out the gap.
  scenario::Scenario burst = scenario::load_scenario(kDir / "listing1.scenario");
  burst.binaries = control::parse_program(
      "board 1:\n  measure q0 len=1us dest=c0\n  hold 4ns\n  measure q1 len=1us dest=c1\n"
      "board 2:\n  hold 1700ns\n  ifbit c1 == 1 goto a\n  end\nlabel a:\n  pulse len=10ns\n");
  const scenario::Outcome o = scenario::execute(burst);
  inspect("burst", o.bed->engine().trace());
  c.expect(tight > 0, "no frame pair was gap-limited");
  c.expect(pairs > 0, "no consecutive frames observed");
  return c.verdict(fmt::format("{} consecutive frame pairs >= 2640 ticks ({} exactly at the gap)", pairs, tight));
}

std::vector<Rational> conditional_amps(const control::JobReport& r, BoardId board) {
  std::vector<Rational> out;
  for (const auto& p : r.pulses) {
    if (p.board == board && p.conditional) out.push_back(p.amplitude_v);
  }
  return out;
}

Verdict ac6_branch_matrix() {
  Check c;
  struct Case {
    std::uint8_t c0, c1;
    std::vector<Rational> amps;
  };
  const std::vector<Case> cases = {
      {1, 1, {Rational(1, 2), Rational(3, 4), Rational(3, 4)}},
      {1, 0, {Rational(1, 2), Rational(3, 4)}},
      {0, 1, {Rational(35, 100)}},
      {0, 0, {}},
  };
  std::vector<std::string> seen;
  for (const Case& k : cases) {
    scenario::Scenario s = scenario::load_scenario(kDir / "listing1.scenario");
    s.testbed.scripts = {{0, {k.c0}}, {1, {k.c1}}};
    const scenario::Outcome o = scenario::execute(s);
    const auto amps = conditional_amps(*o.job, 2);
    std::vector<std::string> txt;
    for (const Rational& a : amps) txt.push_back(to_decimal(a));
    seen.push_back(fmt::format("({},{})->{}", k.c0, k.c1, amps.size()));
    c.expect(amps == k.amps, fmt::format("({},{}): got {{{}}}", k.c0, k.c1, fmt::join(txt, ", ")));
    c.expect(o.job->warnings == 0, "branch read an unknown bit");
  }
  return c.verdict(fmt::format("{} with matching amplitudes", fmt::join(seen, " ")));
}

Verdict ac7_latency_budget() {
  Check c;
  const scenario::Scenario s = scenario::load_scenario(kDir / "listing1.scenario");
  const scenario::Outcome o = scenario::execute(s);
  const control::JobReport& j = *o.job;
  c.expect(s.testbed.demodulation_delay == ns(150), "demodulation delay is not 150 ns");

  std::optional<SimTime> max_link;
  for (const auto& lane : o.bed->lanes()) {
    for (const link::Delivery& d : lane->a_to_b.deliveries()) {
      max_link = max_link ? std::max(*max_link, d.latency()) : d.latency();
    }
  }
  c.expect(max_link.has_value(), "no frame delivered");
  if (max_link) c.expect(*max_link <= ns(450), fmt::format("link latency {} ns > 450 ns", format_ns(*max_link)));

  std::optional<SimTime> interval;
  for (const auto& sh : j.shots) {
    if (sh.board == 2) interval = sh.interval();
  }
  c.expect(interval.has_value(), "no conditional pulse on board 2");
  const std::int64_t target = ns(1600).ticks;
  if (interval) {
    const std::int64_t err = static_cast<std::int64_t>(interval->ticks) - target;
    c.expect(std::abs(err) <= static_cast<std::int64_t>(kCycle),
             fmt::format("interval {} ns outside 1600 +- 2 ns", format_ns(*interval)));
  }

  // Safety, recomputed from the raw records rather than the report flags.
  for (const auto& a : j.arrivals) {
    const auto m = std::find_if(j.measures.begin(), j.measures.end(),
                                [&](const auto& r) { return r.shot == a.shot && r.qubit == a.qubit; });
    c.expect(m != j.measures.end(), "arrival without a measurement");
    if (m == j.measures.end() || !max_link) continue;
    c.expect(m->t_end - m->t_start == ns(1000), "measure pulse is not 1 us");
    c.expect(m->t_end + ns(150) + *max_link <= a.hold_expiry,
             fmt::format("q{}: measure end + 150 ns + link > hold expiry", a.qubit));
    c.expect(a.ok, fmt::format("q{}: report flags a violation", a.qubit));
  }
  c.expect(!j.arrivals.empty(), "no arrival checks");
  const std::string report = scenario::render_report(s, o);
  c.expect(report.find("data-arrival safety: ok") != std::string::npos, "report lacks the safety verdict");
  return c.verdict(fmt::format("interval {} ns, link latency {} ns, {} fresh-data checks ok",
                               interval ? format_ns(*interval, 3) : "-", max_link ? format_ns(*max_link, 3) : "-",
                               j.arrivals.size()));
}

Verdict ac8_crc_faults() {
  Check c;
  std::mt19937_64 rng(8);
  Engine engine;
  fsm::FeedForwardFsm leaf(engine, 2);
  const auto reference = [&] {
    std::vector<std::uint64_t> regs;
    for (unsigned g = 0; g < 4; ++g) regs.push_back(leaf.register_word(g));
    return regs;
  };
  const auto before = reference();
  for (int i = 0; i < 10'000; ++i) {
    std::vector<std::uint64_t> payload(1 + rng() % 4);
    for (auto& w : payload) w = rng() & ~frame::kSpareBit;
    const link::LinkFrame good = link::LinkFrame::seal(payload, 0);
    {
      boost::crc_32_type oracle;
      for (std::uint64_t w : payload) {
        for (int b = 0; b < 8; ++b) oracle.process_byte(static_cast<unsigned char>(w >> (8 * b)));
      }
      c.expect(good.crc == oracle.checksum(), "sealed CRC disagrees with boost::crc_32_type");
    }
    const std::size_t bits = good.bit_count() + 32;
    const std::size_t flip = rng() % bits;
    link::LinkFrame bad = good;
    if (flip < good.bit_count()) {
      bad = link::corrupt(good, flip);
    } else {
      bad.crc ^= std::uint32_t{1} << (flip - good.bit_count());
    }
    c.expect(!bad.crc_ok(), fmt::format("flip of bit {} in a {}-word frame undetected", flip, payload.size()));
    leaf.ff_store(bad, engine.now());
  }
  c.expect(reference() == before, "leaf register absorbed a corrupted frame");
  c.expect(leaf.dropped_frames() == 10'000, fmt::format("{} frames dropped, expected 10000", leaf.dropped_frames()));

  // End to end: every root frame corrupted on the wire, nothing reaches the branch.
  scenario::Scenario s = scenario::load_scenario(kDir / "listing1_matrix.scenario");
  s.testbed.bit_flip_probability = 1.0;
  const scenario::Outcome o = scenario::execute(s);
  const control::JobReport& j = *o.job;
  c.expect(j.injected_faults == j.frames.size() && !j.frames.empty(), "injector did not corrupt every frame");
  c.expect(j.dropped_frames == j.frames.size(), "a corrupted frame was not dropped");
  for (const auto& b : j.branches) {
    c.expect(b.source != control::BitSource::FeedForward, "branch read a value from a corrupted frame");
  }
  const fsm::FeedForwardFsm* ff = o.bed->feed_forward(2);
  c.expect(ff && ff->register_word(0) == 0, "leaf register non-zero after corrupted-only traffic");

  // Half the frames corrupted at random over 64 shots: a shot's branches use
  // feed-forward data exactly when its frame arrived intact.
  scenario::Scenario mixed = scenario::load_scenario(kDir / "listing1_matrix.scenario");
  mixed.testbed.bit_flip_probability = 0.5;
  mixed.job.shots = 64;
  for (auto& [q, script] : mixed.testbed.scripts) {
    script.clear();
    for (int i = 0; i < 64; ++i) script.push_back(static_cast<std::uint8_t>(rng() % 2));
  }
  const scenario::Outcome m = scenario::execute(mixed);
  const auto& deliveries = m.bed->lanes().front()->a_to_b.deliveries();
  c.expect(deliveries.size() == 64, fmt::format("{} deliveries for 64 shots", deliveries.size()));
  std::size_t corrupted = 0;
  for (std::size_t shot = 0; shot < deliveries.size(); ++shot) {
    const bool intact = deliveries[shot].crc_ok;
    corrupted += !intact;
    for (const auto& b : m.job->branches) {
      if (b.shot != shot) continue;
      c.expect((b.source == control::BitSource::FeedForward) == intact,
               fmt::format("shot {}: branch source {} with frame {}", shot, control::to_string(b.source),
                           intact ? "intact" : "corrupted"));
    }
  }
  c.expect(m.job->dropped_frames == corrupted, "dropped count != corrupted deliveries");
  c.expect(corrupted > 0 && corrupted < 64, "mixed run did not mix");
  return c.verdict(fmt::format("10000 single-bit flips detected and dropped; end to end {} + {}/64 corrupted "
                               "frames, 0 absorbed",
                               j.frames.size(), corrupted));
}

Verdict ac9_determinism() {
  Check c;
  std::size_t runs = 0, bytes = 0;
  std::vector<scenario::Scenario> scenarios;
  for (const char* name : {"listing1.scenario", "listing1_matrix.scenario", "listing1_drift.scenario",
                           "ring8.scenario"}) {
    scenarios.push_back(scenario::load_scenario(kDir / name));
  }
  scenario::Scenario faulty = scenarios[1];
  faulty.name = "listing1_matrix_faults";
  faulty.testbed.bit_flip_probability = 0.5;
  scenarios.push_back(faulty);
  for (const scenario::Scenario& s : scenarios) {
    const std::string a = trace_bytes(scenario::execute(s).bed->engine().trace());
    const std::string b = trace_bytes(scenario::execute(s).bed->engine().trace());
    c.expect(a == b, fmt::format("{}: traces differ", s.name));
    c.expect(!a.empty(), fmt::format("{}: empty trace", s.name));
    runs += 2;
    bytes += a.size();
  }
  // Through the file writer as well.
  const fs::path d1 = fs::temp_directory_path() / "qcsim_acc_det1", d2 = fs::temp_directory_path() / "qcsim_acc_det2";
  std::ostringstream diag;
  c.expect(scenario::run(faulty, d1, diag) == 0 && scenario::run(faulty, d2, diag) == 0, diag.str());
  const auto slurp = [](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  for (const char* f : {"trace.jsonl", "pulses.csv", "report.txt"}) {
    c.expect(slurp(d1 / f) == slurp(d2 / f), fmt::format("{} differs between runs", f));
  }
  fs::remove_all(d1);
  fs::remove_all(d2);
  return c.verdict(fmt::format("{} runs of {} scenarios byte-identical ({} trace bytes each pass)", runs,
                               scenarios.size(), bytes));
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"AC1 PTP offset/transit exactness", ac1_ptp_exactness},
      {"AC2 ring convergence + long hold", ac2_ring_convergence},
      {"AC3 throughput overhead", ac3_throughput},
      {"AC4 frame capacity and codec", ac4_codec},
      {"AC5 broadcast gap", ac5_broadcast_gap},
      {"AC6 MCM/feed-forward branch matrix", ac6_branch_matrix},
      {"AC7 latency budget", ac7_latency_budget},
      {"AC8 CRC fault injection", ac8_crc_faults},
      {"AC9 determinism", ac9_determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %s: %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
    std::fflush(stdout);
    failed += !v.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
