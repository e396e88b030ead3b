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

#include "qcsim/link/crc32.hpp"

#include <array>

namespace qcsim::link {
namespace {

constexpr std::uint32_t kReflectedPoly = 0xEDB88320u;

constexpr std::array<std::uint32_t, 256> make_table() {
  std::array<std::uint32_t, 256> table{};
  for (std::uint32_t i = 0; i < 256; ++i) {
    std::uint32_t c = i;
    for (int k = 0; k < 8; ++k) c = (c & 1u) ? (c >> 1) ^ kReflectedPoly : c >> 1;
    table[i] = c;
  }
  return table;
}

constexpr auto kTable = make_table();

std::uint32_t update(std::uint32_t crc, std::uint8_t byte) { return (crc >> 8) ^ kTable[(crc ^ byte) & 0xFFu]; }

}  // namespace

std::uint32_t crc32(std::span<const std::byte> bytes) {
  std::uint32_t crc = 0xFFFFFFFFu;
  for (std::byte b : bytes) crc = update(crc, static_cast<std::uint8_t>(b));
  return crc ^ 0xFFFFFFFFu;
}

std::uint32_t crc32_words(std::span<const std::uint64_t> words) {
  std::uint32_t crc = 0xFFFFFFFFu;
  for (std::uint64_t w : words) {
    for (int i = 0; i < 8; ++i) crc = update(crc, static_cast<std::uint8_t>(w >> (8 * i)));
  }
  return crc ^ 0xFFFFFFFFu;
}

}  // namespace qcsim::link
