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

// Procedural grayscale test scenes: linear gradients, axis-aligned
// rectangles and filled disks, values in [0,1]. Deterministic in
// (seed, index); used for desk-scale training runs and demos.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "sardrn/image.hpp"
#include "sardrn/rng.hpp"

namespace sardrn {

inline ImageF make_toy_image(std::uint64_t seed, std::uint64_t index,
                             int size = 64) {
  if (size < 1) throw ArgumentError("make_toy_image: size must be >= 1");
  std::uint64_t s = seed;
  rng::splitmix64(s);
  s ^= 0x9E3779B97F4A7C15ULL * (index + 1);
  std::mt19937_64 eng(rng::splitmix64(s));

  ImageF img(size, size);
  const int kind = static_cast<int>(index % 3);
  if (kind == 0) {
    // linear gradient with random direction and range
    const double angle = 2.0 * std::numbers::pi * rng::uniform01(eng);
    const double lo = 0.1 + 0.3 * rng::uniform01(eng);
    const double hi = 0.6 + 0.35 * rng::uniform01(eng);
    const double gx = std::cos(angle);
    const double gy = std::sin(angle);
    const double span = static_cast<double>(size - 1);
    for (int r = 0; r < size; ++r) {
      for (int c = 0; c < size; ++c) {
        const double t =
            0.5 + 0.5 * (gx * (c / span - 0.5) + gy * (r / span - 0.5)) /
                      0.7071067811865476;
        img.at(r, c) = lo + (hi - lo) * std::clamp(t, 0.0, 1.0);
      }
    }
  } else if (kind == 1) {
    // constant background plus random rectangles
    const double bg = 0.15 + 0.25 * rng::uniform01(eng);
    for (double& v : img.pixels) v = bg;
    const int count = 3 + static_cast<int>(rng::bounded(eng, 4));
    for (int k = 0; k < count; ++k) {
      const int rw = 6 + static_cast<int>(rng::bounded(
                             eng, static_cast<std::uint64_t>(size / 2)));
      const int rh = 6 + static_cast<int>(rng::bounded(
                             eng, static_cast<std::uint64_t>(size / 2)));
      const int r0 = static_cast<int>(
          rng::bounded(eng, static_cast<std::uint64_t>(
                                std::max(1, size - rh))));
      const int c0 = static_cast<int>(
          rng::bounded(eng, static_cast<std::uint64_t>(
                                std::max(1, size - rw))));
      const double value = 0.2 + 0.75 * rng::uniform01(eng);
      for (int r = r0; r < std::min(size, r0 + rh); ++r) {
        for (int c = c0; c < std::min(size, c0 + rw); ++c) {
          img.at(r, c) = value;
        }
      }
    }
  } else {
    // constant background plus filled disks
    const double bg = 0.2 + 0.3 * rng::uniform01(eng);
    for (double& v : img.pixels) v = bg;
    const int count = 3 + static_cast<int>(rng::bounded(eng, 4));
    for (int k = 0; k < count; ++k) {
      const double radius = 4.0 + 10.0 * rng::uniform01(eng);
      const double cy = radius + (size - 2.0 * radius) * rng::uniform01(eng);
      const double cx = radius + (size - 2.0 * radius) * rng::uniform01(eng);
      const double value = 0.15 + 0.8 * rng::uniform01(eng);
      for (int r = 0; r < size; ++r) {
        for (int c = 0; c < size; ++c) {
          const double dy = r - cy;
          const double dx = c - cx;
          if (dy * dy + dx * dx <= radius * radius) img.at(r, c) = value;
        }
      }
    }
  }
  return img;
}

inline std::vector<ImageF> make_toy_dataset(std::uint64_t seed, int count,
                                            int size = 64) {
  std::vector<ImageF> images;
  images.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    images.push_back(
        make_toy_image(seed, static_cast<std::uint64_t>(i), size));
  }
  return images;
}

}  // namespace sardrn
