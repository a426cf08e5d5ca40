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

// Multiplicative speckle: y = x * n with n ~ Gamma(shape L, rate L), i.i.d.
// per pixel, so E[n] = 1 and Var[n] = 1/L. L is the number of looks;
// stronger speckle means smaller L.

#include <algorithm>
#include <cstdint>
#include <string>

#include "sardrn/errors.hpp"
#include "sardrn/image.hpp"
#include "sardrn/rng.hpp"

namespace sardrn {

struct SpeckleConfig {
  double looks = 1.0;
  std::uint64_t seed = 0;
};

inline void validate_speckle_config(const SpeckleConfig& cfg) {
  if (!(cfg.looks >= 1.0)) {
    throw DomainError("speckle: looks must be >= 1, got " +
                      std::to_string(cfg.looks));
  }
}

// Row-major i.i.d. field of unit-mean Gamma draws. Same (dims, L, seed)
// always produces the identical field.
inline ImageF sample_speckle_field(int height, int width,
                                   const SpeckleConfig& cfg) {
  validate_speckle_config(cfg);
  ImageF field(height, width);
  require_nonempty(field, "sample_speckle_field");
  auto eng = rng::make_engine(cfg.seed, rng::Stream::kSpeckleField);
  for (double& v : field.pixels) {
    v = rng::gamma_unit_scale(eng, cfg.looks) / cfg.looks;
  }
  return field;
}

inline ImageF apply_speckle(const ImageF& x, const SpeckleConfig& cfg) {
  require_nonempty(x, "apply_speckle");
  require_finite_nonnegative(x, "apply_speckle");
  const ImageF field = sample_speckle_field(x.height, x.width, cfg);
  ImageF y = x;
  for (std::size_t i = 0; i < y.pixels.size(); ++i) {
    y.pixels[i] *= field.pixels[i];
  }
  return y;
}

// Equivalent number of looks over a homogeneous region.
//   kMeanOverVar:        mean / variance
//   kMeanSquaredOverVar: mean^2 / variance (conventional; default report)
// Population variance (divide by pixel count).
enum class EnlDefinition { kMeanOverVar, kMeanSquaredOverVar };

inline double enl(const ImageF& region, EnlDefinition definition) {
  if (region.size() < 2) {
    throw ArgumentError("enl: region needs at least 2 pixels");
  }
  double lo = region.pixels[0];
  double hi = region.pixels[0];
  double mean = 0.0;
  for (double v : region.pixels) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    mean += v;
  }
  mean /= static_cast<double>(region.size());
  double var = 0.0;
  for (double v : region.pixels) var += (v - mean) * (v - mean);
  var /= static_cast<double>(region.size());
  if (var == 0.0 || lo == hi) {
    throw DegenerateRegionError(
        "enl: zero variance (constant region, ENL unbounded)");
  }
  return definition == EnlDefinition::kMeanOverVar ? mean / var
                                                   : mean * mean / var;
}

inline ImageF crop(const ImageF& img, int x, int y, int w, int h) {
  if (w < 1 || h < 1) throw ArgumentError("crop: empty region");
  if (x < 0 || y < 0 || x + w > img.width || y + h > img.height) {
    throw ArgumentError("crop: region exceeds image bounds");
  }
  ImageF out(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) out.at(r, c) = img.at(y + r, x + c);
  }
  return out;
}

}  // namespace sardrn
