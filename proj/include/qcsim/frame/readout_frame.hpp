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
 * @file readout_frame.hpp
 * @brief 64-bit readout result word.
 *
 *   bit  63   62..60   59..57  ...  5..3   2..0
 *        0    slot 20  slot 19 ...  slot 1 slot 0
 *
 * Each 3-bit slot is [valid | state(2)], state in the low two bits. Bit 63 is
 * reserved and always written as zero.
 */

#pragma once

#include "qcsim/core/error.hpp"

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qcsim::frame {

inline constexpr unsigned kSlotsPerFrame = 21;
inline constexpr unsigned kBitsPerSlot = 3;
inline constexpr std::uint64_t kSpareBit = std::uint64_t{1} << 63;

class DuplicateIndex : public Error {
 public:
  using Error::Error;
};

struct QubitResult {
  unsigned index = 0;      // slot within the frame, 0..20
  std::uint8_t state = 0;  // 0..3
  bool valid = true;

  friend auto operator<=>(const QubitResult&, const QubitResult&) = default;
};

/// Packs results into one word. Throws DuplicateIndex, IndexOutOfRange
/// (index >= 21) and std::invalid_argument (state > 3).
std::uint64_t encode(std::span<const QubitResult> results);

/// Valid slots only, in index order. The spare bit is ignored.
std::vector<QubitResult> decode(std::uint64_t word);

/// Bits occupied by slot i.
constexpr std::uint64_t slot_mask(unsigned i) { return std::uint64_t{0b111} << (kBitsPerSlot * i); }

/// 16 lowercase hex digits.
std::string to_hex(std::uint64_t word);

}  // namespace qcsim::frame
