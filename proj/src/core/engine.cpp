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

#include "qcsim/core/engine.hpp"

#include "qcsim/core/error.hpp"

#include <algorithm>
#include <utility>

namespace qcsim {
namespace {

// Heap comparator: "a fires after b" keeps the earliest event on top.
bool later(const Event& a, const Event& b) {
  if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
  return a.sequence > b.sequence;
}

}  // namespace

std::uint64_t Engine::schedule(SimTime fire_at, std::string kind, Target target, std::function<void()> action,
                               Json detail) {
  if (fire_at < now_) {
    throw SchedulingInPast("event '" + kind + "' at tick " + std::to_string(fire_at.ticks) +
                           " is before now (" + std::to_string(now_.ticks) + ")");
  }
  const std::uint64_t seq = next_sequence_++;
  queue_.push_back(Event{fire_at, seq, std::move(kind), target, std::move(detail), std::move(action)});
  std::push_heap(queue_.begin(), queue_.end(), later);
  return seq;
}

void Engine::dispatch() {
  std::pop_heap(queue_.begin(), queue_.end(), later);
  Event ev = std::move(queue_.back());
  queue_.pop_back();

  now_ = ev.fire_at;
  current_sequence_ = ev.sequence;
  trace_.push_back(TraceRecord{ev.fire_at, ev.sequence, std::move(ev.kind), ev.target, std::move(ev.detail)});
  current_record_ = trace_.size() - 1;
  if (ev.action) ev.action();
  current_record_.reset();
  current_sequence_ = 0;
}

bool Engine::step() {
  if (queue_.empty()) return false;
  dispatch();
  return true;
}

EventTrace Engine::run_until(SimTime t_stop) {
  const std::size_t first = trace_.size();
  while (!queue_.empty() && queue_.front().fire_at <= t_stop) dispatch();
  if (t_stop > now_) now_ = t_stop;
  return EventTrace(trace_.begin() + static_cast<std::ptrdiff_t>(first), trace_.end());
}

std::optional<SimTime> Engine::next_event_time() const {
  if (queue_.empty()) return std::nullopt;
  return queue_.front().fire_at;
}

void Engine::log(std::string kind, Target target, Json detail) {
  trace_.push_back(TraceRecord{now_, current_sequence_, std::move(kind), target, std::move(detail)});
}

void Engine::annotate(const std::string& key, Json value) {
  if (!current_record_) return;
  Json& detail = trace_[*current_record_].detail;
  if (!detail.is_object()) detail = Json::object();
  detail[key] = std::move(value);
}

Json to_json(const TraceRecord& r) {
  Json j;
  j["t_ticks"] = r.t.ticks;
  j["t_ns"] = r.t.ns();
  j["kind"] = r.kind;
  j["board"] = r.target.board;
  Json detail = r.detail.is_object() ? r.detail : Json::object();
  if (r.target.lane >= 0) detail["lane"] = r.target.lane;
  j["detail"] = std::move(detail);
  return j;
}

}  // namespace qcsim
