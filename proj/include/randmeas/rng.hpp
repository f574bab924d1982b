// Copyright 2026 The randmeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

namespace randmeas {

// Every random draw in this library flows through an RngStream whose seed is
// derived from a master seed plus integer labels (unitary index, site index,
// trial index, ...). Streams are therefore independent of scheduling: any
// worker can regenerate any object bit-exactly from its key. Uniform and
// normal variates are produced from the raw 64-bit engine output (mt19937_64
// is fully specified by the standard), not through std::*_distribution, so
// sequences are identical across standard-library implementations.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Derives a stream seed from a master seed and up to three labels.
/// Chained splitmix64 mixing; distinct label tuples give independent streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ c);
  return h;
}

/// Stream labels used when deriving seeds, so that different purposes never
/// collide even for equal numeric indices.
enum class StreamDomain : std::uint64_t {
  kUnitary = 0x55AA01,
  kShots = 0x55AA02,
  kStatePrep = 0x55AA03,
  kTwirlCheck = 0x55AA04,
  kExperiment = 0x55AA05,
};

inline std::uint64_t derive_seed(std::uint64_t master, StreamDomain dom, std::uint64_t a = 0,
                                 std::uint64_t b = 0) {
  return derive_seed(master, static_cast<std::uint64_t>(dom), splitmix64(a) ^ b, a);
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Pair of independent standard normals (Box-Muller).
  std::pair<double, double> normal_pair() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    return {r * std::cos(a), r * std::sin(a)};
  }

  double normal() { return normal_pair().first; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace randmeas
