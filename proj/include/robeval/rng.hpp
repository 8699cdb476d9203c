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

#include <cstddef>
#include <cstdint>

namespace robeval {

// SplitMix64 (Steele, Lea and Flood, OOPSLA 2014). The n-th output of a
// stream keyed by k is mix64(k + n * kGolden), n = 1, 2, ..., so the
// generator is counter-based and bit-identical on every platform.
inline constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Key of the substream for item `index` of a run seeded with `seed`.
// Independent of how many other items exist.
constexpr uint64_t substream_seed(uint64_t seed, uint64_t index) {
  return mix64(seed ^ mix64(index + kGolden));
}

class CounterStream {
 public:
  explicit constexpr CounterStream(uint64_t key) : state_(key) {}

  constexpr uint64_t next() {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform on [0, 1) with 53 random bits.
  constexpr double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // True with probability p. p <= 0 is never true, p >= 1 always.
  constexpr bool bernoulli(double p) { return uniform() < p; }

  // Uniform index in [0, n); n must be positive.
  constexpr size_t pick(size_t n) {
    return static_cast<size_t>(uniform() * static_cast<double>(n));
  }

 private:
  uint64_t state_;
};

}  // namespace robeval
