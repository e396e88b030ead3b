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

#include "qcsim/control/emulator.hpp"

#include <stdexcept>
#include <string>

namespace qcsim::control {

ReadoutEmulator::ReadoutEmulator(std::map<unsigned, std::vector<std::uint8_t>> scripts, SimTime demodulation_delay)
    : scripts_(std::move(scripts)), demodulation_delay_(demodulation_delay) {
  for (const auto& [q, values] : scripts_) {
    for (std::uint8_t v : values) {
      if (v > 3) throw std::invalid_argument("emulator script for q" + std::to_string(q) + " has value > 3");
    }
  }
}

std::uint8_t ReadoutEmulator::next_result(unsigned qubit) {
  const auto it = scripts_.find(qubit);
  if (it == scripts_.end()) throw ScriptExhausted("no emulator script for q" + std::to_string(qubit));
  std::size_t& at = cursor_[qubit];
  if (at >= it->second.size()) {
    throw ScriptExhausted("emulator script for q" + std::to_string(qubit) + " ran out after " +
                          std::to_string(it->second.size()) + " results");
  }
  return it->second[at++];
}

}  // namespace qcsim::control
