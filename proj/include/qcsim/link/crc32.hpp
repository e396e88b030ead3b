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

#include <cstddef>
#include <cstdint>
#include <span>

namespace qcsim::link {

/// Reflected CRC-32 (poly 0x04C11DB7, init and final xor 0xFFFFFFFF).
/// The check value of "123456789" is 0xCBF43926.
std::uint32_t crc32(std::span<const std::byte> bytes);

/// CRC-32 over 64-bit words serialized little-endian, eight bytes each.
std::uint32_t crc32_words(std::span<const std::uint64_t> words);

}  // namespace qcsim::link
