/* Copyright (c) 2026 The sardrn Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#pragma once

// Deterministic random streams.
//
// Every stochastic component draws from an std::mt19937_64 engine whose seed
// is derived from (user seed, stream kind, stream index) via splitmix64.
// The engine is specified bit-exactly by the C++ standard, and the samplers
// below are written out in full (no std::*_distribution, whose output is
// implementation-defined), so a given (seed, stream) pair yields the same
// values on every platform and release. Streams are independent: consuming
// one never perturbs another, which keeps e.g. per-patch speckle noise
// independent of patch iteration order.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "sardrn/errors.hpp"

namespace sardrn::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Stream kinds used across the toolkit. The numeric values are part of the
// reproducibility contract; do not reorder.
enum class Stream : std::uint64_t {
  kSpeckleField = 0,     // sample_speckle_field / apply_speckle
  kLayerInit = 1,        // index = layer ordinal (1-based)
  kValidationSplit = 2,  // held-out image selection
  kEpochShuffle = 3,     // index = epoch
  kTrainingPair = 4,     // index = global patch ordinal
  kValidationNoise = 5,  // index = validation image ordinal
};

inline std::uint64_t stream_seed(std::uint64_t seed, Stream kind,
                                 std::uint64_t index = 0) {
  std::uint64_t s = seed;
  splitmix64(s);
  s ^= 0x6A09E667F3BCC909ULL * (static_cast<std::uint64_t>(kind) + 1);
  splitmix64(s);
  s ^= 0xBB67AE8584CAA73BULL * (index + 1);
  return splitmix64(s);
}

inline std::mt19937_64 make_engine(std::uint64_t seed, Stream kind,
                                   std::uint64_t index = 0) {
  return std::mt19937_64(stream_seed(seed, kind, index));
}

// Uniform on (0,1]: top 53 bits of one engine word, shifted off zero so that
// log(u) stays finite.
inline double uniform01(std::mt19937_64& eng) {
  return static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53;
}

// Standard normal via Box-Muller. One value per call, two engine words
// consumed; no state is cached between calls.
inline double normal(std::mt19937_64& eng) {
  const double u1 = uniform01(eng);
  const double u2 = uniform01(eng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

// Gamma(shape, scale 1) for shape >= 1, Marsaglia-Tsang squeeze/rejection.
inline double gamma_unit_scale(std::mt19937_64& eng, double shape) {
  if (shape < 1.0) {
    throw DomainError("gamma sampler requires shape >= 1, got " +
                      std::to_string(shape));
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = normal(eng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01(eng);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

// Unbiased-to-2^-64 integer in [0, n) via the multiply-shift reduction.
inline std::uint64_t bounded(std::mt19937_64& eng, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(eng()) * n) >> 64);
}

// Fisher-Yates, descending index, bounded() draws.
template <typename T>
void shuffle(std::vector<T>& values, std::mt19937_64& eng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(bounded(eng, i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace sardrn::rng
