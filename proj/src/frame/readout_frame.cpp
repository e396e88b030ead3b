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

#include "qcsim/frame/readout_frame.hpp"

#include <fmt/format.h>

#include <bitset>
#include <stdexcept>

namespace qcsim::frame {

std::uint64_t encode(std::span<const QubitResult> results) {
  std::uint64_t word = 0;
  std::bitset<kSlotsPerFrame> seen;
  for (const QubitResult& r : results) {
    if (r.index >= kSlotsPerFrame) {
      throw IndexOutOfRange("qubit slot " + std::to_string(r.index) + " outside 21-slot frame");
    }
    if (seen.test(r.index)) throw DuplicateIndex("qubit slot " + std::to_string(r.index) + " given twice");
    if (r.state > 3) throw std::invalid_argument("qubit state " + std::to_string(r.state) + " exceeds 2 bits");
    seen.set(r.index);
    const std::uint64_t slot = r.valid ? (std::uint64_t{r.state} | 0b100u) : 0u;  // absent slots stay all-zero
    word |= slot << (kBitsPerSlot * r.index);
  }
  return word;
}

std::vector<QubitResult> decode(std::uint64_t word) {
  std::vector<QubitResult> out;
  for (unsigned i = 0; i < kSlotsPerFrame; ++i) {
    const std::uint64_t slot = (word >> (kBitsPerSlot * i)) & 0b111u;
    if (slot & 0b100u) out.push_back(QubitResult{i, static_cast<std::uint8_t>(slot & 0b11u), true});
  }
  return out;
}

std::string to_hex(std::uint64_t word) { return fmt::format("{:016x}", word); }

}  // namespace qcsim::frame
