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

#include <cstddef>
#include <string>
#include <vector>

#include "sardrn/errors.hpp"

namespace sardrn {

// Dense 4-D array in (batch, channel, height, width) order, row-major,
// double precision. The carrier for all network data and gradients.
struct Tensor4 {
  int n = 0;
  int c = 0;
  int h = 0;
  int w = 0;
  std::vector<double> data;

  Tensor4() = default;

  Tensor4(int n_, int c_, int h_, int w_, double fill = 0.0)
      : n(n_), c(c_), h(h_), w(w_) {
    if (n_ < 0 || c_ < 0 || h_ < 0 || w_ < 0) {
      throw ShapeError("tensor dims must be nonnegative");
    }
    data.assign(static_cast<std::size_t>(n_) * c_ * h_ * w_, fill);
  }

  std::size_t size() const { return data.size(); }

  std::size_t index(int in, int ic, int iy, int ix) const {
    return ((static_cast<std::size_t>(in) * c + ic) * h + iy) * w + ix;
  }

  double& at(int in, int ic, int iy, int ix) {
    return data[index(in, ic, iy, ix)];
  }
  double at(int in, int ic, int iy, int ix) const {
    return data[index(in, ic, iy, ix)];
  }

  // Start of the (batch, channel) plane.
  double* plane(int in, int ic) { return data.data() + index(in, ic, 0, 0); }
  const double* plane(int in, int ic) const {
    return data.data() + index(in, ic, 0, 0);
  }

  bool same_shape(const Tensor4& o) const {
    return n == o.n && c == o.c && h == o.h && w == o.w;
  }

  std::string shape_string() const {
    return std::to_string(n) + "x" + std::to_string(c) + "x" +
           std::to_string(h) + "x" + std::to_string(w);
  }
};

inline void require_nonempty(const Tensor4& t, const char* what) {
  if (t.n < 1) throw ShapeError(std::string(what) + ": batch axis < 1");
  if (t.c < 1) throw ShapeError(std::string(what) + ": channel axis < 1");
  if (t.h < 1) throw ShapeError(std::string(what) + ": height axis < 1");
  if (t.w < 1) throw ShapeError(std::string(what) + ": width axis < 1");
}

inline void require_same_shape(const Tensor4& a, const Tensor4& b,
                               const char* what) {
  if (a.n != b.n)
    throw ShapeError(std::string(what) + ": batch axis mismatch, " +
                     a.shape_string() + " vs " + b.shape_string());
  if (a.c != b.c)
    throw ShapeError(std::string(what) + ": channel axis mismatch, " +
                     a.shape_string() + " vs " + b.shape_string());
  if (a.h != b.h)
    throw ShapeError(std::string(what) + ": height axis mismatch, " +
                     a.shape_string() + " vs " + b.shape_string());
  if (a.w != b.w)
    throw ShapeError(std::string(what) + ": width axis mismatch, " +
                     a.shape_string() + " vs " + b.shape_string());
}

inline Tensor4 add_elementwise(const Tensor4& a, const Tensor4& b) {
  require_same_shape(a, b, "add_elementwise");
  Tensor4 out = a;
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += b.data[i];
  return out;
}

inline Tensor4 relu_forward(const Tensor4& x) {
  Tensor4 out = x;
  for (double& v : out.data) v = v > 0.0 ? v : 0.0;
  return out;
}

// Upstream gradient masked by (x > 0); the subgradient at exactly 0 is 0.
inline Tensor4 relu_backward(const Tensor4& grad_out, const Tensor4& x) {
  require_same_shape(grad_out, x, "relu_backward");
  Tensor4 out = grad_out;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    if (!(x.data[i] > 0.0)) out.data[i] = 0.0;
  }
  return out;
}

}  // namespace sardrn
