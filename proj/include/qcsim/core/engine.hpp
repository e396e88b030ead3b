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

/**
 * @file engine.hpp
 * @brief Deterministic discrete-event engine.
 *
 * Events are ordered by (fire_at, sequence); the sequence number is assigned
 * at schedule time, so two events for the same tick run in the order they were
 * scheduled. Every dispatched event appends one record to the run trace,
 * and actions may append further records through log() or decorate the
 * record of the event being dispatched through annotate().
 *
 * An Engine is a self-contained value: nothing is shared between instances,
 * so independent scenarios may run on separate threads.
 */

#pragma once

#include "qcsim/core/time.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qcsim {

using Json = nlohmann::json;

/// Board/lane addressed by an event. -1 means "not applicable".
struct Target {
  int board = -1;
  int lane = -1;

  friend bool operator==(const Target&, const Target&) = default;
};

struct TraceRecord {
  SimTime t;
  std::uint64_t sequence = 0;
  std::string kind;
  Target target;
  Json detail;
};

using EventTrace = std::vector<TraceRecord>;

struct Event {
  SimTime fire_at;
  std::uint64_t sequence = 0;
  std::string kind;
  Target target;
  Json detail;
  std::function<void()> action;
};

class Engine {
 public:
  SimTime now() const { return now_; }

  /// Enqueues an event; returns its sequence number. Throws SchedulingInPast.
  std::uint64_t schedule(SimTime fire_at, std::string kind, Target target, std::function<void()> action,
                         Json detail = Json::object());

  /// Processes every event with fire_at <= t_stop and advances now() to
  /// t_stop. Returns the records appended during the call.
  EventTrace run_until(SimTime t_stop);

  /// Processes the single earliest event. Returns false if the queue is empty.
  bool step();

  std::optional<SimTime> next_event_time() const;
  bool idle() const { return queue_.empty(); }
  std::size_t pending() const { return queue_.size(); }

  /// Appends a record at now(), tagged with the sequence of the event being
  /// dispatched (0 outside dispatch).
  void log(std::string kind, Target target, Json detail = Json::object());

  /// Adds a field to the record of the event currently being dispatched.
  void annotate(const std::string& key, Json value);

  const EventTrace& trace() const { return trace_; }

 private:
  void dispatch();

  std::vector<Event> queue_;  // binary heap, earliest on top
  EventTrace trace_;
  SimTime now_{};
  std::uint64_t next_sequence_ = 1;
  std::uint64_t current_sequence_ = 0;
  std::optional<std::size_t> current_record_;
};

/// One trace line in the line-delimited output schema:
/// {t_ticks, t_ns, kind, board, detail}.
Json to_json(const TraceRecord& r);

}  // namespace qcsim
