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

#include "qcsim/fsm/feed_forward_fsm.hpp"
#include "qcsim/fsm/readout_fsm.hpp"
#include "qcsim/fsm/star.hpp"

#include <gtest/gtest.h>

#include <map>
#include <memory>
#include <random>

using namespace qcsim;
using namespace qcsim::fsm;

namespace {

struct Star {
  Engine engine;
  std::vector<std::unique_ptr<link::SimplexChannel>> lanes;
  std::vector<std::unique_ptr<FeedForwardFsm>> leaves;
  ReadoutFsm root;

  Star(unsigned leaf_count, unsigned qubits) : root(engine, 0, qubits) {
    for (unsigned i = 0; i < leaf_count; ++i) {
      lanes.push_back(std::make_unique<link::SimplexChannel>(engine, link::LaneConfig{}, link::LaneSchedule{},
                                                             static_cast<int>(i), 0, static_cast<BoardId>(i + 1)));
      leaves.push_back(std::make_unique<FeedForwardFsm>(engine, static_cast<BoardId>(i + 1)));
      FeedForwardFsm* leaf = leaves.back().get();
      lanes.back()->connect([this, leaf](const link::LinkFrame& f, const link::Delivery&) {
        leaf->ff_store(f, engine.now());
      });
      root.attach_lane(*lanes.back());
    }
  }
};

std::vector<SimTime> frame_starts(const EventTrace& trace) {
  std::vector<SimTime> out;
  for (const auto& r : trace) {
    if (r.kind == "fsm.frame_tx") out.push_back(r.t);
  }
  return out;
}

}  // namespace

TEST(capture_result, accept_reject_and_independence) {
  Engine e;
  ReadoutFsm fsm(e, 1, 2);
  EXPECT_EQ(fsm.capture_result(0, 1, SimTime{0}), CaptureOutcome::Accepted);
  EXPECT_TRUE(fsm.slot(0).valid);
  EXPECT_TRUE(fsm.slot(0).locked);
  EXPECT_EQ(fsm.capture_result(0, 2, SimTime{0}), CaptureOutcome::Rejected);
  EXPECT_EQ(fsm.overwrite_attempts(), 1u);
  EXPECT_EQ(fsm.slot(0).state, 1);
  EXPECT_EQ(fsm.phase(), ReadoutPhase::Accumulating);

  Engine e2;
  ReadoutFsm other(e2, 1, 2);
  e2.schedule(SimTime{100}, "cap", {}, [&] { other.capture_result(1, 1, e2.now()); });
  e2.schedule(SimTime{50'000}, "cap", {}, [&] { other.capture_result(0, 3, e2.now()); });
  e2.run_until(SimTime{1'000'000});
  EXPECT_EQ(other.overwrite_attempts(), 0u);
  EXPECT_EQ(other.transmitted_state()[0], 3);
  EXPECT_EQ(other.transmitted_state()[1], 1);
  EXPECT_THROW(other.capture_result(2, 0, e2.now()), IndexOutOfRange);
}

TEST(broadcast_ready_frames, same_frame_to_every_leaf) {
  Star s(3, 4);
  s.root.capture_result(0, 1, SimTime{0});
  s.root.capture_result(2, 3, SimTime{0});
  s.engine.run_until(SimTime{1'000'000});
  ASSERT_EQ(s.root.transmissions().size(), 1u);
  EXPECT_EQ(s.root.transmissions()[0].deliveries.size(), 3u);
  for (const auto& leaf : s.leaves) {
    EXPECT_EQ(leaf->register_word(), s.root.transmissions()[0].word);
    EXPECT_EQ(leaf->ff_query(0u), (QueryAnswer{0, 1, true}));
    EXPECT_EQ(leaf->ff_query(2u), (QueryAnswer{2, 3, true}));
  }
  EXPECT_EQ(s.root.phase(), ReadoutPhase::Idle);
}

TEST(broadcast_ready_frames, second_frame_waits_for_gap) {
  Star s(1, 2);
  s.engine.schedule(SimTime{0}, "cap", {}, [&] { s.root.capture_result(0, 1, s.engine.now()); });
  s.engine.schedule(SimTime{10}, "cap", {}, [&] { s.root.capture_result(1, 1, s.engine.now()); });
  s.engine.run_until(SimTime{1'000'000});
  const auto starts = frame_starts(s.engine.trace());
  ASSERT_EQ(starts.size(), 2u);
  EXPECT_EQ(starts[1].ticks - starts[0].ticks, 2640u);
}

TEST(broadcast_ready_frames, nothing_pending_sends_nothing) {
  Star s(2, 2);
  EXPECT_TRUE(s.root.broadcast_ready_frames(SimTime{0}).empty());
  s.engine.run_until(SimTime{100'000});
  EXPECT_TRUE(s.root.transmissions().empty());
}

TEST(broadcast_ready_frames, groups_beyond_21_qubits_use_separate_frames) {
  Star s(1, 30);
  s.root.capture_result(3, 2, SimTime{0});
  s.root.capture_result(25, 1, SimTime{0});
  s.engine.run_until(SimTime{1'000'000});
  ASSERT_EQ(s.root.transmissions().size(), 2u);
  EXPECT_EQ(s.root.transmissions()[0].sequence, 0u);
  EXPECT_EQ(s.root.transmissions()[1].sequence, 1u);
  EXPECT_EQ(s.leaves[0]->ff_query(25u), (QueryAnswer{25, 1, true}));
  EXPECT_EQ(s.leaves[0]->ff_query(3u), (QueryAnswer{3, 2, true}));
}

TEST(broadcast_ready_frames, slot_unlocks_at_transmission_start) {
  Star s(1, 1);
  s.root.capture_result(0, 1, SimTime{0});
  s.engine.run_until(SimTime{0});
  ASSERT_EQ(s.root.transmissions().size(), 1u);
  EXPECT_FALSE(s.root.slot(0).locked);
  EXPECT_EQ(s.root.capture_result(0, 2, SimTime{0}), CaptureOutcome::Accepted);
}

TEST(ff_store, merge_overwrite_and_drop) {
  Engine e;
  FeedForwardFsm ff(e, 2);
  const frame::QubitResult q0{0, 1, true}, q1{1, 3, true}, q0b{0, 0, true};
  ff.ff_store(link::LinkFrame::seal({frame::encode({&q0, 1})}), SimTime{10});
  ff.ff_store(link::LinkFrame::seal({frame::encode({&q1, 1})}), SimTime{20});
  EXPECT_EQ(ff.ff_query(0u), (QueryAnswer{0, 1, true}));
  EXPECT_EQ(ff.ff_query(1u), (QueryAnswer{1, 3, true}));
  EXPECT_EQ(*ff.last_update(), SimTime{20});

  ff.ff_store(link::LinkFrame::seal({frame::encode({&q0b, 1})}), SimTime{30});
  EXPECT_EQ(ff.ff_query(0u), (QueryAnswer{0, 0, true}));

  const std::uint64_t before = ff.register_word();
  ff.ff_store(link::corrupt(link::LinkFrame::seal({frame::encode({&q1, 1})}), 3), SimTime{40});
  EXPECT_EQ(ff.register_word(), before);
  EXPECT_EQ(ff.dropped_frames(), 1u);
  EXPECT_EQ(*ff.last_update(), SimTime{30});
}

TEST(ff_query, unknown_and_read_only) {
  Engine e;
  FeedForwardFsm ff(e, 2);
  EXPECT_EQ(ff.ff_query(5u), (QueryAnswer{5, 0, false}));
  const frame::QubitResult a{0, 1, true};
  ff.ff_store(link::LinkFrame::seal({frame::encode({&a, 1})}), SimTime{1});
  const std::vector<unsigned> q{0, 1, 5};
  const auto first = ff.ff_query(q);
  const auto second = ff.ff_query(q);
  EXPECT_EQ(first, second);
  EXPECT_EQ(first[0], (QueryAnswer{0, 1, true}));
  EXPECT_FALSE(first[1].known);
}

TEST(ReadoutFsm, property_no_overwrite_gap_and_agreement) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const unsigned qubits = static_cast<unsigned>(rng() % 40 + 1);
    Star s(static_cast<unsigned>(rng() % 4 + 1), qubits);
    for (int i = 0; i < 200; ++i) {
      const SimTime at{rng() % 200'000};
      const unsigned q = static_cast<unsigned>(rng() % qubits);
      const auto st = static_cast<std::uint8_t>(rng() % 4);
      s.engine.schedule(at, "cap", {}, [&s, q, st] { s.root.capture_result(q, st, s.engine.now()); });
    }
    s.engine.run_until(SimTime{5'000'000});

    // No-overwrite: replay the trace; each frame carries the first accepted
    // value of each slot since that slot's previous transmission.
    std::map<unsigned, std::uint8_t> pending;
    for (const auto& r : s.engine.trace()) {
      if (r.kind == "fsm.capture" && r.detail["accepted"] == true) {
        const unsigned q = r.detail["qubit"];
        ASSERT_FALSE(pending.count(q));
        pending[q] = r.detail["state"];
      } else if (r.kind == "fsm.frame_tx") {
        const unsigned group = r.detail["sequence"];
        const std::uint64_t word = std::stoull(r.detail["word"].get<std::string>(), nullptr, 16);
        for (const auto& res : frame::decode(word)) {
          const unsigned q = group * frame::kSlotsPerFrame + res.index;
          ASSERT_TRUE(pending.count(q));
          ASSERT_EQ(pending[q], res.state);
          pending.erase(q);
        }
      }
    }
    ASSERT_TRUE(pending.empty());

    const auto starts = frame_starts(s.engine.trace());
    for (std::size_t i = 1; i < starts.size(); ++i) ASSERT_GE(starts[i].ticks - starts[i - 1].ticks, 2640u);

    for (const auto& leaf : s.leaves) {
      for (unsigned q = 0; q < qubits; ++q) {
        const auto& tx = s.root.transmitted_state()[q];
        const QueryAnswer a = leaf->ff_query(q);
        ASSERT_EQ(a.known, tx.has_value());
        if (tx) {
          ASSERT_EQ(a.state, *tx);
        }
      }
    }
  }
}

TEST(StarTopology, validates_fan_out) {
  Cluster c;
  for (int i = 0; i < 6; ++i) c.add(Board(i, ClockDomain(kControlClock)));
  EXPECT_NO_THROW((StarTopology{0, {1, 2, 3, 4}}.validate(c)));
  EXPECT_THROW((StarTopology{0, {1, 2, 3, 4, 5}}.validate(c)), std::invalid_argument);
  EXPECT_THROW((StarTopology{0, {0}}.validate(c)), std::invalid_argument);
  EXPECT_THROW((StarTopology{0, {1, 1}}.validate(c)), std::invalid_argument);
  EXPECT_THROW((StarTopology{0, {9}}.validate(c)), UnknownBoard);
}
