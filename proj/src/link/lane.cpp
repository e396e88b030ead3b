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

#include "qcsim/link/lane.hpp"

#include "qcsim/link/crc32.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace qcsim::link {
namespace {

// Count of c in [0, n) with c % m == r.
std::uint64_t residue_count(std::uint64_t n, std::uint64_t m, std::uint64_t r) {
  return n > r ? (n - r - 1) / m + 1 : 0;
}

}  // namespace

void LaneConfig::validate() const {
  if (line_rate_bps <= 0) throw std::invalid_argument("lane: line rate must be positive");
  (void)user_cycle();  // throws NonRepresentableDuration when off the tick grid
  if (tx_cdc_depth == 0 || rx_cdc_depth == 0) throw std::invalid_argument("lane: CDC FIFO depth must be >= 1");
}

void LaneSchedule::validate() const {
  if (pause_period == 1) throw std::invalid_argument("lane: pause period 1 leaves no data cycles");
  if (comp_period != 0 && comp_length >= comp_period) {
    throw std::invalid_argument("lane: compensation sequence must be shorter than its period");
  }
}

std::uint64_t LaneSchedule::first_data_cycle_from(std::uint64_t c) const {
  while (!is_data_cycle(c)) ++c;
  return c;
}

std::uint64_t LaneSchedule::count_data_cycles(std::uint64_t begin, std::uint64_t end) const {
  if (end <= begin) return 0;
  auto pauses = [&](std::uint64_t n) { return pause_period ? residue_count(n, pause_period, pause_period - 1) : 0; };
  auto comps = [&](std::uint64_t n) {
    return comp_period ? (n / comp_period) * comp_length + std::min(n % comp_period, comp_length) : 0;
  };
  // Cycles that are both a pause and a compensation cycle repeat with the
  // least common period; list their residues once.
  std::vector<std::uint64_t> overlap;
  std::uint64_t period = 0;
  if (pause_period && comp_period) {
    period = std::lcm(pause_period, comp_period);
    for (std::uint64_t k = 0; k < period / comp_period; ++k) {
      for (std::uint64_t j = 0; j < comp_length; ++j) {
        const std::uint64_t c = k * comp_period + j;
        if (is_pause_cycle(c)) overlap.push_back(c);
      }
    }
  }
  auto both = [&](std::uint64_t n) -> std::uint64_t {
    if (overlap.empty()) return 0;
    const std::uint64_t rem = n % period;
    const auto partial = static_cast<std::uint64_t>(
        std::lower_bound(overlap.begin(), overlap.end(), rem) - overlap.begin());
    return (n / period) * overlap.size() + partial;
  };
  auto data = [&](std::uint64_t n) { return n - pauses(n) - comps(n) + both(n); };
  return data(end) - data(begin);
}

LinkFrame LinkFrame::seal(std::vector<std::uint64_t> payload, std::uint32_t sequence) {
  LinkFrame f;
  f.crc = crc32_words(payload);
  f.payload = std::move(payload);
  f.sequence = sequence;
  return f;
}

bool LinkFrame::crc_ok() const { return crc32_words(payload) == crc; }

LinkFrame corrupt(LinkFrame frame, std::size_t bit_index) {
  if (bit_index >= frame.bit_count()) {
    throw IndexOutOfRange("bit " + std::to_string(bit_index) + " outside " + std::to_string(frame.bit_count()) +
                          "-bit payload");
  }
  frame.payload[bit_index / 64] ^= std::uint64_t{1} << (bit_index % 64);
  return frame;
}

SimplexChannel::SimplexChannel(Engine& engine, LaneConfig config, LaneSchedule schedule, int lane, BoardId from,
                               BoardId to)
    : engine_(&engine), config_(config), schedule_(schedule), lane_(lane), from_(from), to_(to) {
  config_.validate();
  schedule_.validate();
  cycle_ = config_.user_cycle();
}

std::size_t SimplexChannel::tx_occupancy(std::uint64_t cycle) const {
  return static_cast<std::size_t>(
      std::count_if(queued_.begin(), queued_.end(), [cycle](std::uint64_t c) { return c >= cycle; }));
}

Delivery SimplexChannel::transmit(const LinkFrame& frame, SimTime t_submit) {
  if (frame.payload.empty()) throw std::invalid_argument("transmit: empty frame");
  if (t_submit < engine_->now()) {
    throw SchedulingInPast("transmit: submission at tick " + std::to_string(t_submit.ticks) + " is in the past");
  }
  if (t_submit < last_submit_) throw std::invalid_argument("transmit: submissions must be in time order");

  const std::uint64_t submit_cycle = (t_submit.ticks + cycle_.ticks - 1) / cycle_.ticks;
  while (!queued_.empty() && queued_.front() < submit_cycle) queued_.pop_front();
  if (queued_.size() + frame.payload.size() > config_.tx_cdc_depth) {
    throw FifoOverflow("lane " + std::to_string(lane_) + ": " + std::to_string(frame.payload.size()) +
                       "-word frame does not fit tx FIFO (" + std::to_string(queued_.size()) + "/" +
                       std::to_string(config_.tx_cdc_depth) + " words queued)");
  }
  last_submit_ = t_submit;

  std::uint64_t c = std::max(submit_cycle, next_free_cycle_);
  Delivery d;
  d.lane = lane_;
  d.from = from_;
  d.to = to_;
  d.submitted = t_submit;
  d.submit_cycle = submit_cycle;
  d.words = frame.payload.size();
  d.sequence = frame.sequence;
  for (std::size_t i = 0; i < frame.payload.size(); ++i) {
    c = schedule_.first_data_cycle_from(c);
    if (i == 0) d.first_cycle = c;
    queued_.push_back(c);
    d.last_cycle = c;
    ++c;
  }
  next_free_cycle_ = c;
  const std::uint64_t pipeline = config_.tx_cdc_latency_cycles + config_.rx_cdc_latency_cycles;
  d.delivered = SimTime{(d.last_cycle + 1 + pipeline) * cycle_.ticks} + config_.fiber_delay;

  LinkFrame received = frame;
  if (fault_) fault_(received);
  d.crc_ok = received.crc_ok();
  deliveries_.push_back(d);

  engine_->log("link.tx", Target{from_, lane_},
               Json{{"to", to_}, {"words", d.words}, {"submit_ticks", d.submitted.ticks},
                    {"first_cycle", d.first_cycle}, {"sequence", d.sequence}});
  engine_->schedule(d.delivered, "link.rx", Target{to_, lane_},
                    [this, received = std::move(received), d]() {
                      if (receiver_) receiver_(received, d);
                    },
                    to_json(d));
  return d;
}

Json to_json(const Delivery& d) {
  return Json{{"lane", d.lane},
              {"from", d.from},
              {"submit_ticks", d.submitted.ticks},
              {"delivery_ticks", d.delivered.ticks},
              {"payload_words", d.words},
              {"crc_ok", d.crc_ok},
              {"sequence", d.sequence}};
}

}  // namespace qcsim::link
