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

#include "qcsim/core/error.hpp"
#include "qcsim/core/time.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace qcsim::control {

class ScriptExhausted : public Error {
 public:
  using Error::Error;
};

/// 150 ns at 82.5 GHz.
inline constexpr SimTime kDefaultDemodulationDelay{12375};

/// Scripted stand-in for the qubit readout chain. Each measurement of a qubit
/// consumes the next value of that qubit's script.
class ReadoutEmulator {
 public:
  ReadoutEmulator() = default;
  explicit ReadoutEmulator(std::map<unsigned, std::vector<std::uint8_t>> scripts,
                           SimTime demodulation_delay = kDefaultDemodulationDelay);

  /// Throws ScriptExhausted when the qubit has no script or no values left.
  std::uint8_t next_result(unsigned qubit);

  SimTime available_at(SimTime measure_end) const { return measure_end + demodulation_delay_; }
  SimTime demodulation_delay() const { return demodulation_delay_; }

  /// Rewinds every script to its first value.
  void rewind() { cursor_.clear(); }

  const std::map<unsigned, std::vector<std::uint8_t>>& scripts() const { return scripts_; }

 private:
  std::map<unsigned, std::vector<std::uint8_t>> scripts_;
  std::map<unsigned, std::size_t> cursor_;
  SimTime demodulation_delay_ = kDefaultDemodulationDelay;
};

}  // namespace qcsim::control
