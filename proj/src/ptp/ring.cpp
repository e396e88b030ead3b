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

#include "qcsim/ptp/ring.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

namespace qcsim::ptp {
namespace {

class RingSyncRun : public std::enable_shared_from_this<RingSyncRun> {
 public:
  RingSyncRun(Engine& engine, Cluster& cluster, RingTopology ring, std::function<void(const SyncReport&)> done,
              ExchangeOptions options, std::uint32_t round)
      : engine_(engine), cluster_(cluster), ring_(std::move(ring)), done_(std::move(done)), options_(options) {
    report_.round = round;
  }

  void next() {
    const std::size_t n = ring_.order.size();
    if (index_ >= n) {
      if (done_) done_(report_);
      return;
    }
    Board& primary = cluster_.board(ring_.order[index_]);
    Board& secondary = cluster_.board(ring_.order[(index_ + 1) % n]);
    const bool closing = index_ + 1 == n;
    auto self = shared_from_this();
    start_exchange(
        engine_, primary, secondary, *ring_.links[index_],
        [self, &primary, &secondary, closing](const PtpExchange& x) {
          self->finish(primary, secondary, x, closing);
        },
        options_);
  }

 private:
  void finish(Board& primary, Board& secondary, const PtpExchange& x, bool closing) {
    SyncRecord rec;
    rec.primary = primary.id();
    rec.secondary = secondary.id();
    rec.exchange = x;
    rec.offset = compute_offset(x);
    rec.transit = compute_transit(x);
    rec.verification = closing;
    rec.completed_at = engine_.now();
    if (!closing) {
      rec.applied = rec.offset.whole;
      apply_correction(secondary, rec.applied);
      report_.records.push_back(rec);
      report_.corrections.push_back(rec.applied);
    } else {
      report_.closing = rec;
    }
    Json detail = to_json(rec);
    detail["round"] = report_.round;
    engine_.log(closing ? "ptp.verify" : "ptp.sync", Target{secondary.id(), -1}, std::move(detail));
    ++index_;
    next();
  }

  Engine& engine_;
  Cluster& cluster_;
  RingTopology ring_;
  std::function<void(const SyncReport&)> done_;
  ExchangeOptions options_;
  SyncReport report_;
  std::size_t index_ = 0;
};

}  // namespace

RingTopology RingTopology::uniform(std::vector<BoardId> order, SyncLink link) {
  RingTopology ring;
  ring.links.assign(order.size(), link);
  ring.order = std::move(order);
  return ring;
}

void RingTopology::validate(const Cluster& cluster) const {
  if (order.size() < 2) throw RingOpen("ring needs at least two boards");
  if (links.size() != order.size()) {
    throw RingOpen("ring of " + std::to_string(order.size()) + " boards needs " + std::to_string(order.size()) +
                   " links, got " + std::to_string(links.size()));
  }
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (!links[i]) {
      throw RingOpen("missing sync link " + std::to_string(order[i]) + " -> " +
                     std::to_string(order[(i + 1) % order.size()]));
    }
  }
  for (BoardId id : order) (void)cluster.board(id);
}

void RingTopology::wire(Cluster& cluster) const {
  validate(cluster);
  const std::size_t n = order.size();
  for (std::size_t i = 0; i < n; ++i) {
    Board& b = cluster.board(order[i]);
    b.connect_downstream(order[(i + 1) % n]);
    b.connect_upstream(order[(i + n - 1) % n]);
  }
}

void start_ring_sync(Engine& engine, Cluster& cluster, const RingTopology& ring,
                     std::function<void(const SyncReport&)> done, ExchangeOptions options, std::uint32_t round) {
  ring.validate(cluster);
  auto run = std::make_shared<RingSyncRun>(engine, cluster, ring, std::move(done), options, round);
  run->next();
}

SyncReport ring_synchronize(Engine& engine, Cluster& cluster, const RingTopology& ring, ExchangeOptions options) {
  std::optional<SyncReport> report;
  start_ring_sync(engine, cluster, ring, [&report](const SyncReport& r) { report = r; }, options);
  while (!report) {
    if (!engine.step()) throw std::logic_error("ring_synchronize: engine drained before completion");
  }
  return *report;
}

void schedule_periodic_resync(Engine& engine, Cluster& cluster, RingTopology ring, SimTime first, SimTime period,
                              SimTime until, std::function<void(const SyncReport&)> on_round,
                              ExchangeOptions options) {
  if (period.ticks == 0) throw std::invalid_argument("resync period must be positive");
  ring.validate(cluster);
  // The chain reschedules itself; each event owns a copy of the state it needs.
  struct Resync {
    Engine* engine;
    Cluster* cluster;
    RingTopology ring;
    SimTime period;
    SimTime until;
    std::function<void(const SyncReport&)> on_round;
    ExchangeOptions options;
    std::uint32_t round;

    void arm(SimTime at) const {
      if (at > until) return;
      Resync next = *this;
      engine->schedule(at, "ptp.resync", Target{ring.order.front(), -1}, [next, at]() {
        start_ring_sync(*next.engine, *next.cluster, next.ring, next.on_round, next.options, next.round);
        Resync after = next;
        ++after.round;
        after.arm(at + next.period);
      });
    }
  };
  Resync{&engine, &cluster, std::move(ring), period, until, std::move(on_round), options, 1}.arm(first);
}

Json to_json(const SyncRecord& r) {
  Json j;
  j["primary"] = r.primary;
  j["secondary"] = r.secondary;
  j["t1"] = r.exchange.t1;
  j["t2"] = r.exchange.t2;
  j["t3"] = r.exchange.t3;
  j["t4"] = r.exchange.t4;
  j["offset"] = r.offset.whole;
  j["offset_residual_half"] = r.offset.half;
  j["transit"] = r.transit.whole;
  j["transit_residual_half"] = r.transit.half;
  j["applied"] = r.applied;
  j["verification"] = r.verification;
  return j;
}

}  // namespace qcsim::ptp
