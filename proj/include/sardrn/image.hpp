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

#include <cmath>
#include <cstddef>
#include <vector>

#include "sardrn/errors.hpp"
#include "sardrn/tensor.hpp"

namespace sardrn {

// Single-channel image, row-major doubles. Clean images live in [0,1];
// speckled values may exceed 1 and raw despeckled values may dip below 0
// (clamping happens only at export).
struct ImageF {
  int height = 0;
  int width = 0;
  std::vector<double> pixels;

  ImageF() = default;

  ImageF(int height_, int width_, double fill = 0.0)
      : height(height_), width(width_) {
    if (height_ < 0 || width_ < 0) {
      throw ShapeError("image dims must be nonnegative");
    }
    pixels.assign(static_cast<std::size_t>(height_) * width_, fill);
  }

  double& at(int row, int col) {
    return pixels[static_cast<std::size_t>(row) * width + col];
  }
  double at(int row, int col) const {
    return pixels[static_cast<std::size_t>(row) * width + col];
  }

  std::size_t size() const { return pixels.size(); }
};

inline void require_nonempty(const ImageF& img, const char* what) {
  if (img.height < 1) throw ShapeError(std::string(what) + ": height axis < 1");
  if (img.width < 1) throw ShapeError(std::string(what) + ": width axis < 1");
}

inline void require_same_shape(const ImageF& a, const ImageF& b,
                               const char* what) {
  if (a.height != b.height)
    throw ShapeError(std::string(what) + ": height axis mismatch");
  if (a.width != b.width)
    throw ShapeError(std::string(what) + ": width axis mismatch");
}

inline void require_finite_nonnegative(const ImageF& img, const char* what) {
  for (double v : img.pixels) {
    if (!std::isfinite(v) || v < 0.0) {
      throw NumericError(std::string(what) +
                         ": pixels must be finite and >= 0");
    }
  }
}

inline Tensor4 image_to_tensor(const ImageF& img) {
  require_nonempty(img, "image_to_tensor");
  Tensor4 t(1, 1, img.height, img.width);
  t.data = img.pixels;
  return t;
}

inline ImageF tensor_to_image(const Tensor4& t) {
  if (t.n != 1) throw ShapeError("tensor_to_image: batch axis must be 1");
  if (t.c != 1) throw ShapeError("tensor_to_image: channel axis must be 1");
  ImageF img(t.h, t.w);
  img.pixels = t.data;
  return img;
}

}  // namespace sardrn
