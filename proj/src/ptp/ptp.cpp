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

#include "qcsim/ptp/ptp.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>

namespace qcsim::ptp {
namespace {

HalfCycles halve(std::int64_t twice) {
  // C++ integer division truncates toward zero; the remainder keeps its sign.
  return HalfCycles{twice / 2, static_cast<int>(twice % 2)};
}

}  // namespace

HalfCycles compute_offset(const PtpExchange& x) { return halve((x.t2 - x.t1) - (x.t4 - x.t3)); }

HalfCycles compute_transit(const PtpExchange& x) {
  const std::int64_t twice = (x.t4 - x.t1) - (x.t3 - x.t2);
  if (twice < 0) {
    throw NegativeTransit("negative transit (" + std::to_string(twice) +
                          " half-cycles): link asymmetry or misconfiguration");
  }
  return halve(twice);
}

void start_exchange(Engine& engine, Board& primary, Board& secondary, const SyncLink& link,
                    std::function<void(const PtpExchange&)> done, ExchangeOptions options) {
  if (options.turnaround_cycles < 0) throw std::invalid_argument("turnaround must be non-negative");

  auto state = std::make_shared<PtpExchange>();
  Board* p = &primary;
  Board* s = &secondary;
  const Target at_primary{p->id(), -1};
  const Target at_secondary{s->id(), -1};
  const SimTime t_send = p->control_clock().next_edge(engine.now());

  engine.schedule(t_send, "ptp.t1", at_primary, [&engine, p, s, link, state, options, done = std::move(done),
                                                 at_primary, at_secondary]() mutable {
    state->t1 = p->control_clock().counter_at(engine.now());
    engine.annotate("counter", state->t1);
    engine.annotate("peer", s->id());
    engine.schedule(engine.now() + link.forward_delay, "ptp.t2", at_secondary,
                    [&engine, p, s, link, state, options, done = std::move(done), at_primary]() mutable {
      state->t2 = s->control_clock().counter_at(engine.now());
      engine.annotate("counter", state->t2);
      const SimTime t_reply = s->control_clock().time_of_count(state->t2 + options.turnaround_cycles);
      engine.schedule(t_reply, "ptp.t3", Target{s->id(), -1},
                      [&engine, p, s, link, state, done = std::move(done), at_primary]() mutable {
        state->t3 = s->control_clock().counter_at(engine.now());
        engine.annotate("counter", state->t3);
        engine.schedule(engine.now() + link.reverse_delay, "ptp.t4", at_primary,
                        [&engine, p, state, done = std::move(done)]() {
          state->t4 = p->control_clock().counter_at(engine.now());
          engine.annotate("counter", state->t4);
          if (done) done(*state);
        });
      });
    });
  });
}

PtpExchange perform_exchange(Engine& engine, Board& primary, Board& secondary, const SyncLink& link,
                             ExchangeOptions options) {
  std::optional<PtpExchange> result;
  start_exchange(engine, primary, secondary, link, [&result](const PtpExchange& x) { result = x; }, options);
  while (!result) {
    if (!engine.step()) throw std::logic_error("perform_exchange: engine drained before t4");
  }
  return *result;
}

void apply_correction(Board& board, std::int64_t offset) {
  board.control_clock().adjust_counter_correction(-offset);
}

}  // namespace qcsim::ptp
