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

// The SAR-DRN despeckler: seven size-preserving dilated convolution layers
// (dilations 1,2,3,4,3,2,1, pad = dilation) with two additive skip
// connections, trained to predict the residual phi = y - x. The despeckled
// estimate is x_hat = y - phi_hat.
//
// Skip attach rule: a skip (s, t) adds the post-activation output of layer s
// to the post-activation output of layer t-1, and the sum becomes the input
// of layer t. Both attach points must therefore carry the same channel
// count. With the default skips {(1,3), (4,7)} the sums feed layers 3 and 7,
// and every attach point is 64-channel.

#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "sardrn/conv.hpp"
#include "sardrn/errors.hpp"
#include "sardrn/image.hpp"
#include "sardrn/rng.hpp"
#include "sardrn/tensor.hpp"

namespace sardrn {

enum class Activation : std::uint8_t { kNone = 0, kRelu = 1 };

struct LayerSpec {
  int out_channels = 64;
  int kernel = 3;
  int dilation = 1;
  int pad = 1;
  Activation activation = Activation::kRelu;
};

struct NetworkSpec {
  std::vector<LayerSpec> layers;
  // 1-based (source, dest) pairs, source < dest.
  std::vector<std::pair<int, int>> skips;
  bool residual_output = true;

  static std::vector<std::pair<int, int>> default_skips() {
    return {{1, 3}, {4, 7}};
  }

  // The standard seven-layer configuration. `channels` narrows the six
  // feature layers uniformly for desk-scale runs; 64 is the full model.
  static NetworkSpec sardrn(int channels = 64) {
    NetworkSpec spec;
    const int dilations[7] = {1, 2, 3, 4, 3, 2, 1};
    for (int l = 0; l < 7; ++l) {
      LayerSpec layer;
      layer.out_channels = l == 6 ? 1 : channels;
      layer.dilation = dilations[l];
      layer.pad = dilations[l];
      layer.activation = l == 6 ? Activation::kNone : Activation::kRelu;
      spec.layers.push_back(layer);
    }
    spec.skips = default_skips();
    return spec;
  }
};

struct Network {
  NetworkSpec spec;
  std::vector<ConvLayerParams> params;

  std::size_t parameter_count() const {
    std::size_t count = 0;
    for (const auto& p : params) count += p.weights.size() + p.bias.size();
    return count;
  }
};

inline int layer_in_channels(const NetworkSpec& spec, int layer /*1-based*/) {
  return layer == 1 ? 1
                    : spec.layers[static_cast<std::size_t>(layer - 2)]
                          .out_channels;
}

inline void validate_spec(const NetworkSpec& spec) {
  if (spec.layers.empty()) throw SpecError("network spec: no layers");
  const int depth = static_cast<int>(spec.layers.size());
  for (int l = 1; l <= depth; ++l) {
    const auto& layer = spec.layers[static_cast<std::size_t>(l - 1)];
    if (layer.out_channels < 1)
      throw SpecError("network spec: layer " + std::to_string(l) +
                      " out_channels < 1");
    if (layer.kernel < 1 || layer.dilation < 1 || layer.pad < 0)
      throw SpecError("network spec: layer " + std::to_string(l) +
                      " has invalid kernel/dilation/pad");
    if (layer.pad * 2 != layer.dilation * (layer.kernel - 1))
      throw SpecError("network spec: layer " + std::to_string(l) +
                      " is not size-preserving (need 2*pad = d*(S-1))");
  }
  for (const auto& [s, t] : spec.skips) {
    if (s < 1 || t > depth || s >= t)
      throw SpecError("network spec: skip (" + std::to_string(s) + "," +
                      std::to_string(t) + ") out of range or not s < t");
    const int src_ch =
        spec.layers[static_cast<std::size_t>(s - 1)].out_channels;
    const int attach_ch =
        spec.layers[static_cast<std::size_t>(t - 2)].out_channels;
    if (src_ch != attach_ch)
      throw SpecError("network spec: skip (" + std::to_string(s) + "," +
                      std::to_string(t) + ") attach-point channel mismatch, " +
                      std::to_string(src_ch) + " vs " +
                      std::to_string(attach_ch));
    if (src_ch != layer_in_channels(spec, t))
      throw SpecError("network spec: skip (" + std::to_string(s) + "," +
                      std::to_string(t) + ") channel mismatch with layer " +
                      std::to_string(t) + " input");
  }
}

// Weight init: zero-mean Gaussian, std sqrt(2 / fan_in) with
// fan_in = in_channels * kernel^2; biases zero. One rng stream per layer,
// so the same seed always yields the same initial network.
inline Network build_sardrn(const NetworkSpec& spec, std::uint64_t seed) {
  validate_spec(spec);
  Network net;
  net.spec = spec;
  const int depth = static_cast<int>(spec.layers.size());
  for (int l = 1; l <= depth; ++l) {
    const auto& layer = spec.layers[static_cast<std::size_t>(l - 1)];
    const int in_ch = layer_in_channels(spec, l);
    ConvLayerParams p(layer.out_channels, in_ch, layer.kernel, layer.dilation,
                      layer.pad);
    const double stddev =
        std::sqrt(2.0 / (static_cast<double>(in_ch) * layer.kernel *
                         layer.kernel));
    auto eng = rng::make_engine(seed, rng::Stream::kLayerInit,
                                static_cast<std::uint64_t>(l));
    for (double& w : p.weights) w = stddev * rng::normal(eng);
    net.params.push_back(std::move(p));
  }
  return net;
}

// Per-layer tensors retained for the backward pass: the conv input of each
// layer (after any skip sum) and its post-activation output.
struct ForwardTrace {
  std::vector<Tensor4> inputs;
  std::vector<Tensor4> outputs;
};

inline Tensor4 forward(const Network& net, const Tensor4& y,
                       ForwardTrace* trace = nullptr) {
  require_nonempty(y, "network forward");
  if (net.params.empty()) throw SpecError("network forward: no layers");
  if (y.c != net.params.front().in_channels) {
    throw ShapeError("network forward: channel axis must be " +
                     std::to_string(net.params.front().in_channels) +
                     ", got " + std::to_string(y.c));
  }
  int min_spatial = 1;
  for (const auto& layer : net.spec.layers) {
    min_spatial =
        std::max(min_spatial, layer.dilation * (layer.kernel - 1) + 1);
  }
  if (y.h < min_spatial || y.w < min_spatial) {
    throw ShapeError("network forward: spatial dims must be >= " +
                     std::to_string(min_spatial) + ", got " +
                     y.shape_string());
  }

  const int depth = static_cast<int>(net.spec.layers.size());
  std::vector<Tensor4> local_outputs;
  std::vector<Tensor4>& outputs = trace ? trace->outputs : local_outputs;
  outputs.assign(static_cast<std::size_t>(depth), Tensor4());
  if (trace) trace->inputs.assign(static_cast<std::size_t>(depth), Tensor4());

  for (int l = 1; l <= depth; ++l) {
    const auto idx = static_cast<std::size_t>(l - 1);
    Tensor4 input = l == 1 ? y : outputs[static_cast<std::size_t>(l - 2)];
    for (const auto& [s, t] : net.spec.skips) {
      if (t == l) {
        input = add_elementwise(input, outputs[static_cast<std::size_t>(s - 1)]);
      }
    }
    Tensor4 pre =
        conv2d_dilated_forward(input, net.params[idx]);
    outputs[idx] = net.spec.layers[idx].activation == Activation::kRelu
                       ? relu_forward(pre)
                       : std::move(pre);
    if (trace) trace->inputs[idx] = std::move(input);
  }
  return outputs[static_cast<std::size_t>(depth - 1)];
}

struct NetworkGrads {
  std::vector<std::vector<double>> weights;  // per layer
  std::vector<std::vector<double>> bias;     // per layer
  Tensor4 input;                             // gradient wrt the network input
};

// Reverse pass over the recorded trace. Gradients accumulate in a fixed
// (descending-layer) order, so results are bit-reproducible.
inline NetworkGrads backward(const Network& net, const ForwardTrace& trace,
                             const Tensor4& grad_out) {
  const int depth = static_cast<int>(net.spec.layers.size());
  if (static_cast<int>(trace.inputs.size()) != depth ||
      static_cast<int>(trace.outputs.size()) != depth) {
    throw ArgumentError("network backward: trace does not match network");
  }
  NetworkGrads grads;
  grads.weights.resize(static_cast<std::size_t>(depth));
  grads.bias.resize(static_cast<std::size_t>(depth));

  // grad wrt the post-activation output of each layer
  std::vector<Tensor4> gout(static_cast<std::size_t>(depth));
  gout[static_cast<std::size_t>(depth - 1)] = grad_out;
  for (int l = depth; l >= 1; --l) {
    const auto idx = static_cast<std::size_t>(l - 1);
    Tensor4 g = gout[idx];
    if (net.spec.layers[idx].activation == Activation::kRelu) {
      // post-activation values are positive exactly where the
      // pre-activation was, so the trace output doubles as the mask
      g = relu_backward(g, trace.outputs[idx]);
    }
    GradBundle bundle =
        conv2d_dilated_backward(g, trace.inputs[idx], net.params[idx]);
    grads.weights[idx] = std::move(bundle.grad_weights);
    grads.bias[idx] = std::move(bundle.grad_bias);

    if (l == 1) {
      grads.input = std::move(bundle.grad_input);
    } else {
      Tensor4& prev = gout[static_cast<std::size_t>(l - 2)];
      prev = prev.size() == 0 ? bundle.grad_input
                              : add_elementwise(prev, bundle.grad_input);
      for (const auto& [s, t] : net.spec.skips) {
        if (t == l) {
          Tensor4& src = gout[static_cast<std::size_t>(s - 1)];
          src = src.size() == 0 ? bundle.grad_input
                                : add_elementwise(src, bundle.grad_input);
        }
      }
    }
  }
  return grads;
}

// x_hat = y - phi_hat. Raw values are preserved (no clamping) so metrics
// stay faithful; clamping to [0,1] happens at image export.
inline ImageF despeckle(const Network& net, const ImageF& y) {
  const Tensor4 residual = forward(net, image_to_tensor(y));
  if (residual.c != 1 || residual.h != y.height || residual.w != y.width) {
    throw ShapeError("despeckle: network output " + residual.shape_string() +
                     " does not match the input image");
  }
  ImageF out = y;
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    out.pixels[i] -= residual.data[i];
  }
  return out;
}

struct ReceptiveFieldReport {
  int depth = 0;
  int common_rf = 0;            // plain 3x3 stack: 2*l + 1
  int dilated_doubling_rf = 0;  // dilations 1,2,4,...: 2^(l+1) - 1
  int config_rf = 0;            // arbitrary dilation list: 1 + 2*sum(d)
};

inline ReceptiveFieldReport receptive_field(const std::vector<int>& dilations) {
  if (dilations.empty())
    throw ArgumentError("receptive_field: empty dilation list");
  int sum = 0;
  for (int d : dilations) {
    if (d < 1) throw ArgumentError("receptive_field: dilation must be >= 1");
    sum += d;
  }
  ReceptiveFieldReport report;
  report.depth = static_cast<int>(dilations.size());
  report.common_rf = 2 * report.depth + 1;
  report.dilated_doubling_rf = (1 << (report.depth + 1)) - 1;
  report.config_rf = 1 + 2 * sum;
  return report;
}

inline ReceptiveFieldReport receptive_field(int depth) {
  if (depth < 1) throw ArgumentError("receptive_field: depth must be >= 1");
  return receptive_field(std::vector<int>(static_cast<std::size_t>(depth), 1));
}

}  // namespace sardrn
