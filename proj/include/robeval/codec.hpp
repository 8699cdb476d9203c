// Copyright 2026 The robeval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace robeval {

// FNV-1a, 64-bit.
uint64_t fnv1a64(std::span<const uint8_t> bytes);

std::string sha256_hex(std::string_view data);

std::string base64_encode(std::span<const uint8_t> bytes);
// Strict: rejects lengths that are not a multiple of 4 and stray characters.
std::optional<std::vector<uint8_t>> base64_decode(std::string_view text);

// Little-endian IEEE-754 binary32 packing.
std::vector<uint8_t> pack_f32_le(std::span<const float> values);
std::optional<std::vector<float>> unpack_f32_le(std::span<const uint8_t> bytes);

// Shortest decimal that round-trips (std::to_chars).
std::string format_shortest(double value);
// Fixed notation with the given number of decimals.
std::string format_fixed(double value, int decimals);

}  // namespace robeval
