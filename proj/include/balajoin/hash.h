// Copyright 2026 The Balajoin Authors.
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

#include "balajoin/types.h"

namespace balajoin {

inline constexpr uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// splitmix64 output mixing function.
constexpr uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// The cluster-wide key hash. Equals the first output of a splitmix64 stream
// seeded with `x`, so every node (and every port of this code) computes the
// same value without coordination.
constexpr uint64_t hash64(uint64_t x) { return mix64(x + kGoldenGamma); }

inline NodeId hash_node(Key key, uint32_t n) {
  return static_cast<NodeId>(hash64(key) % n);
}

// splitmix64 pseudo random stream. Bit-exact across implementations.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

  // Uniform double in [0, 1) from the top 53 bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound).
  uint64_t next_below(uint64_t bound) {
    return static_cast<uint64_t>(next_double() * static_cast<double>(bound));
  }

 private:
  uint64_t state_;
};

}  // namespace balajoin
