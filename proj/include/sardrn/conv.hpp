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

// Dilated 2-D convolution, stride 1, zero padding, exact forward and
// backward passes.
//
// The kernel is applied as a cross-correlation (no kernel flip); trained
// weights absorb the flip, so the parameterization is equivalent to the
// flipped-kernel form for learning purposes.
//
// All loops accumulate in a fixed sequential order, so results are
// bit-reproducible for a given build regardless of how callers thread
// around this module.

#include <cstddef>
#include <string>
#include <vector>

#include "sardrn/errors.hpp"
#include "sardrn/tensor.hpp"

namespace sardrn {

// Weights are laid out (out_channels, in_channels, kernel, kernel),
// row-major. Stride is fixed at 1.
struct ConvLayerParams {
  int out_channels = 0;
  int in_channels = 0;
  int kernel = 3;
  int dilation = 1;
  int pad = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  ConvLayerParams() = default;

  ConvLayerParams(int out_ch, int in_ch, int kernel_, int dilation_, int pad_)
      : out_channels(out_ch),
        in_channels(in_ch),
        kernel(kernel_),
        dilation(dilation_),
        pad(pad_),
        weights(static_cast<std::size_t>(out_ch) * in_ch * kernel_ * kernel_,
                0.0),
        bias(static_cast<std::size_t>(out_ch), 0.0) {}

  std::size_t weight_index(int o, int i, int u, int v) const {
    return ((static_cast<std::size_t>(o) * in_channels + i) * kernel + u) *
               kernel +
           v;
  }

  double& weight(int o, int i, int u, int v) {
    return weights[weight_index(o, i, u, v)];
  }
  double weight(int o, int i, int u, int v) const {
    return weights[weight_index(o, i, u, v)];
  }
};

struct GradBundle {
  Tensor4 grad_input;
  std::vector<double> grad_weights;  // same layout as ConvLayerParams::weights
  std::vector<double> grad_bias;
};

inline void validate_conv_params(const ConvLayerParams& p) {
  if (p.out_channels < 1)
    throw ShapeError("conv: out_channels axis < 1");
  if (p.in_channels < 1) throw ShapeError("conv: in_channels axis < 1");
  if (p.kernel < 1) throw ShapeError("conv: kernel axis < 1");
  if (p.dilation < 1) throw ArgumentError("conv: dilation must be >= 1");
  if (p.pad < 0) throw ArgumentError("conv: pad must be >= 0");
  const std::size_t expect_w = static_cast<std::size_t>(p.out_channels) *
                               p.in_channels * p.kernel * p.kernel;
  if (p.weights.size() != expect_w)
    throw ShapeError("conv: weights size " + std::to_string(p.weights.size()) +
                     " != out*in*kernel^2 = " + std::to_string(expect_w));
  if (p.bias.size() != static_cast<std::size_t>(p.out_channels))
    throw ShapeError("conv: bias size " + std::to_string(p.bias.size()) +
                     " != out_channels = " + std::to_string(p.out_channels));
}

// Output spatial extent for stride 1: H_out = H + 2*pad - dilation*(kernel-1).
inline int conv_output_extent(int extent, const ConvLayerParams& p) {
  return extent + 2 * p.pad - p.dilation * (p.kernel - 1);
}

// out[n,o,i,j] = bias[o]
//              + sum_{c,u,v} W[o,c,u,v] * x[n, c, i + d*u - pad, j + d*v - pad]
// with x read as 0 outside its extent.
inline Tensor4 conv2d_dilated_forward(const Tensor4& x,
                                      const ConvLayerParams& p) {
  require_nonempty(x, "conv2d_dilated_forward input");
  validate_conv_params(p);
  if (x.c != p.in_channels)
    throw ShapeError("conv: channel axis mismatch, input has " +
                     std::to_string(x.c) + ", layer expects " +
                     std::to_string(p.in_channels));
  const int ho = conv_output_extent(x.h, p);
  const int wo = conv_output_extent(x.w, p);
  if (ho < 1)
    throw ShapeError("conv: height axis too small, H + 2*pad must be >= " +
                     std::to_string(p.dilation * (p.kernel - 1) + 1));
  if (wo < 1)
    throw ShapeError("conv: width axis too small, W + 2*pad must be >= " +
                     std::to_string(p.dilation * (p.kernel - 1) + 1));

  Tensor4 out(x.n, p.out_channels, ho, wo);
  const int d = p.dilation;
  for (int n = 0; n < x.n; ++n) {
    for (int o = 0; o < p.out_channels; ++o) {
      double* out_plane = out.plane(n, o);
      const double b = p.bias[static_cast<std::size_t>(o)];
      for (int i = 0; i < ho * wo; ++i) out_plane[i] = b;
      for (int c = 0; c < p.in_channels; ++c) {
        const double* x_plane = x.plane(n, c);
        for (int u = 0; u < p.kernel; ++u) {
          // rows with i + d*u - pad inside [0, H)
          const int i_lo = std::max(0, p.pad - d * u);
          const int i_hi = std::min(ho, x.h + p.pad - d * u);
          for (int v = 0; v < p.kernel; ++v) {
            const double wgt = p.weight(o, c, u, v);
            const int off = d * v - p.pad;
            const int j_lo = std::max(0, -off);
            const int j_hi = std::min(wo, x.w - off);
            for (int i = i_lo; i < i_hi; ++i) {
              const double* xr = x_plane +
                                 static_cast<std::size_t>(i + d * u - p.pad) *
                                     x.w;
              double* orow = out_plane + static_cast<std::size_t>(i) * wo;
              for (int j = j_lo; j < j_hi; ++j) {
                orow[j] += wgt * xr[j + off];
              }
            }
          }
        }
      }
    }
  }
  return out;
}

// Exact gradients of conv2d_dilated_forward:
//   grad_bias[o]        = sum_{n,i,j} grad_out[n,o,i,j]
//   grad_weights[o,c,u,v] = sum_{n,i,j} grad_out[n,o,i,j] * x[n,c,i+d*u-p,j+d*v-p]
//   grad_input          = zero-padded adjoint (transposed dilated conv).
inline GradBundle conv2d_dilated_backward(const Tensor4& grad_out,
                                          const Tensor4& x,
                                          const ConvLayerParams& p) {
  require_nonempty(x, "conv2d_dilated_backward input");
  validate_conv_params(p);
  if (x.c != p.in_channels)
    throw ShapeError("conv backward: channel axis mismatch on input");
  const int ho = conv_output_extent(x.h, p);
  const int wo = conv_output_extent(x.w, p);
  if (grad_out.n != x.n || grad_out.c != p.out_channels || grad_out.h != ho ||
      grad_out.w != wo) {
    throw ShapeError("conv backward: grad_out shape " +
                     grad_out.shape_string() + " != forward output shape " +
                     Tensor4(x.n, p.out_channels, std::max(ho, 0),
                             std::max(wo, 0))
                         .shape_string());
  }

  GradBundle g;
  g.grad_input = Tensor4(x.n, x.c, x.h, x.w);
  g.grad_weights.assign(p.weights.size(), 0.0);
  g.grad_bias.assign(p.bias.size(), 0.0);
  const int d = p.dilation;

  for (int o = 0; o < p.out_channels; ++o) {
    double acc = 0.0;
    for (int n = 0; n < x.n; ++n) {
      const double* go_plane = grad_out.plane(n, o);
      for (int i = 0; i < ho * wo; ++i) acc += go_plane[i];
    }
    g.grad_bias[static_cast<std::size_t>(o)] = acc;
  }

  // Each weight gradient is a long dot product; eight independent partial
  // sums keep the row reductions vectorizable. The lane layout and the
  // final lane summation order are fixed, so results never depend on
  // anything external.
  for (int o = 0; o < p.out_channels; ++o) {
    for (int c = 0; c < p.in_channels; ++c) {
      for (int u = 0; u < p.kernel; ++u) {
        const int i_lo = std::max(0, p.pad - d * u);
        const int i_hi = std::min(ho, x.h + p.pad - d * u);
        for (int v = 0; v < p.kernel; ++v) {
          const int off = d * v - p.pad;
          const int j_lo = std::max(0, -off);
          const int j_hi = std::min(wo, x.w - off);
          double lanes[8] = {0, 0, 0, 0, 0, 0, 0, 0};
          double tail = 0.0;
          for (int n = 0; n < x.n; ++n) {
            const double* go_plane = grad_out.plane(n, o);
            const double* x_plane = x.plane(n, c);
            for (int i = i_lo; i < i_hi; ++i) {
              const double* gr = go_plane + static_cast<std::size_t>(i) * wo;
              const double* xr =
                  x_plane +
                  static_cast<std::size_t>(i + d * u - p.pad) * x.w;
              int j = j_lo;
              for (; j + 8 <= j_hi; j += 8) {
                for (int k = 0; k < 8; ++k) {
                  lanes[k] += gr[j + k] * xr[j + k + off];
                }
              }
              for (; j < j_hi; ++j) {
                tail += gr[j] * xr[j + off];
              }
            }
          }
          double acc = tail;
          for (double lane : lanes) acc += lane;
          g.grad_weights[p.weight_index(o, c, u, v)] = acc;
        }
      }
    }
  }

  // grad_x[n,c,y,s] = sum_{o,u,v} W[o,c,u,v] * grad_out[n,o,y+p-d*u,s+p-d*v]
  for (int n = 0; n < x.n; ++n) {
    for (int c = 0; c < p.in_channels; ++c) {
      double* gx_plane = g.grad_input.plane(n, c);
      for (int o = 0; o < p.out_channels; ++o) {
        const double* go_plane = grad_out.plane(n, o);
        for (int u = 0; u < p.kernel; ++u) {
          // rows with y + pad - d*u inside [0, Ho)
          const int y_lo = std::max(0, d * u - p.pad);
          const int y_hi = std::min(x.h, ho + d * u - p.pad);
          for (int v = 0; v < p.kernel; ++v) {
            const double wgt = p.weight(o, c, u, v);
            const int off = p.pad - d * v;
            const int s_lo = std::max(0, -off);
            const int s_hi = std::min(x.w, wo - off);
            for (int y = y_lo; y < y_hi; ++y) {
              double* gxr = gx_plane + static_cast<std::size_t>(y) * x.w;
              const double* gr =
                  go_plane +
                  static_cast<std::size_t>(y + p.pad - d * u) * wo;
              for (int s = s_lo; s < s_hi; ++s) {
                gxr[s] += wgt * gr[s + off];
              }
            }
          }
        }
      }
    }
  }
  return g;
}

}  // namespace sardrn
