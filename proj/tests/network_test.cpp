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

#include "sardrn/network.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sardrn/gradcheck.hpp"
#include "sardrn/rng.hpp"
#include "sardrn/training.hpp"

namespace sardrn {
namespace {

void zero_params(Network& net) {
  for (auto& p : net.params) {
    std::fill(p.weights.begin(), p.weights.end(), 0.0);
    std::fill(p.bias.begin(), p.bias.end(), 0.0);
  }
}

// 1-channel stack with all-ones kernels: pushing an impulse through
// measures the true receptive-field footprint.
Network all_ones_network(const std::vector<int>& dilations) {
  NetworkSpec spec;
  for (int d : dilations) {
    LayerSpec layer;
    layer.out_channels = 1;
    layer.dilation = d;
    layer.pad = d;
    layer.activation = Activation::kNone;
    spec.layers.push_back(layer);
  }
  Network net = build_sardrn(spec, 0);
  for (auto& p : net.params) {
    std::fill(p.weights.begin(), p.weights.end(), 1.0);
  }
  return net;
}

int impulse_support_width(const std::vector<int>& dilations) {
  const Network net = all_ones_network(dilations);
  int span = 1;
  for (int d : dilations) span += 2 * d;
  const int size = span + 6;  // odd margin around the footprint
  const int extent = size % 2 == 0 ? size + 1 : size;
  Tensor4 x(1, 1, extent, extent);
  x.at(0, 0, extent / 2, extent / 2) = 1.0;
  const Tensor4 out = forward(net, x);
  int lo = extent;
  int hi = -1;
  for (int j = 0; j < extent; ++j) {
    if (out.at(0, 0, extent / 2, j) != 0.0) {
      lo = std::min(lo, j);
      hi = std::max(hi, j);
    }
  }
  return hi - lo + 1;
}

TEST(BuildSardrn, DefaultParameterCount) {
  const Network net = build_sardrn(NetworkSpec::sardrn(), 1);
  ASSERT_EQ(net.params.size(), 7u);
  EXPECT_EQ(net.params[0].weights.size() + net.params[0].bias.size(), 640u);
  for (int l = 1; l <= 5; ++l) {
    EXPECT_EQ(net.params[static_cast<std::size_t>(l)].weights.size() +
                  net.params[static_cast<std::size_t>(l)].bias.size(),
              36928u);
  }
  EXPECT_EQ(net.params[6].weights.size() + net.params[6].bias.size(), 577u);
  EXPECT_EQ(net.parameter_count(), 185857u);
}

TEST(BuildSardrn, SeedDeterminesWeights) {
  const Network a = build_sardrn(NetworkSpec::sardrn(4), 7);
  const Network b = build_sardrn(NetworkSpec::sardrn(4), 7);
  const Network c = build_sardrn(NetworkSpec::sardrn(4), 8);
  for (std::size_t l = 0; l < a.params.size(); ++l) {
    EXPECT_EQ(a.params[l].weights, b.params[l].weights);
    EXPECT_EQ(a.params[l].bias, b.params[l].bias);
  }
  EXPECT_NE(a.params[0].weights, c.params[0].weights);
}

TEST(BuildSardrn, BiasesStartAtZero) {
  const Network net = build_sardrn(NetworkSpec::sardrn(4), 7);
  for (const auto& p : net.params) {
    for (double b : p.bias) EXPECT_EQ(b, 0.0);
  }
}

TEST(BuildSardrn, ChannelIncompatibleSkipIsSpecError) {
  NetworkSpec spec = NetworkSpec::sardrn(8);
  spec.layers[5].out_channels = 4;  // skip (4,7) attaches 8 vs 4 channels
  EXPECT_THROW(build_sardrn(spec, 0), SpecError);

  NetworkSpec bad_order = NetworkSpec::sardrn(8);
  bad_order.skips = {{3, 3}};
  EXPECT_THROW(build_sardrn(bad_order, 0), SpecError);
}

TEST(Forward, ZeroNetworkGivesZeroResidual) {
  Network net = build_sardrn(NetworkSpec::sardrn(4), 3);
  zero_params(net);
  std::mt19937_64 eng(5);
  Tensor4 y(2, 1, 12, 12);
  for (double& v : y.data) v = rng::uniform01(eng);
  const Tensor4 out = forward(net, y);
  for (double v : out.data) EXPECT_EQ(v, 0.0);
}

TEST(Forward, ZeroWeightsFinalBiasGivesConstant) {
  Network net = build_sardrn(NetworkSpec::sardrn(4), 3);
  zero_params(net);
  net.params[6].bias[0] = 0.37;
  Tensor4 y(1, 1, 16, 16, 0.8);
  const Tensor4 out = forward(net, y);
  for (double v : out.data) EXPECT_EQ(v, 0.37);
}

TEST(Forward, PreservesShape) {
  const Network net = build_sardrn(NetworkSpec::sardrn(4), 9);
  std::mt19937_64 eng(6);
  Tensor4 y(2, 1, 40, 40);
  for (double& v : y.data) v = rng::uniform01(eng);
  const Tensor4 out = forward(net, y);
  EXPECT_EQ(out.n, 2);
  EXPECT_EQ(out.c, 1);
  EXPECT_EQ(out.h, 40);
  EXPECT_EQ(out.w, 40);
}

TEST(Forward, RejectsMultiChannelInput) {
  const Network net = build_sardrn(NetworkSpec::sardrn(4), 9);
  EXPECT_THROW(forward(net, Tensor4(1, 2, 16, 16)), ShapeError);
}

TEST(Forward, RejectsTooSmallSpatialExtent) {
  const Network net = build_sardrn(NetworkSpec::sardrn(4), 9);
  EXPECT_THROW(forward(net, Tensor4(1, 1, 8, 16)), ShapeError);
  EXPECT_NO_THROW(forward(net, Tensor4(1, 1, 9, 9)));
}

TEST(Forward, LinearizedNetworkScalesExactly) {
  // identity activations + zero biases make the whole map linear
  NetworkSpec spec = NetworkSpec::sardrn(8);
  for (auto& layer : spec.layers) layer.activation = Activation::kNone;
  Network net = build_sardrn(spec, 11);
  for (auto& p : net.params) std::fill(p.bias.begin(), p.bias.end(), 0.0);

  std::mt19937_64 eng(12);
  Tensor4 y(1, 1, 14, 14);
  for (double& v : y.data) v = rng::uniform01(eng) - 0.5;
  Tensor4 doubled = y;
  for (double& v : doubled.data) v *= 2.0;

  const Tensor4 base = forward(net, y);
  const Tensor4 scaled = forward(net, doubled);
  for (std::size_t i = 0; i < base.data.size(); ++i) {
    EXPECT_NEAR(scaled.data[i], 2.0 * base.data[i],
                1e-12 * std::max(1.0, std::fabs(2.0 * base.data[i])));
  }
}

TEST(Despeckle, ZeroNetworkIsIdentity) {
  Network net = build_sardrn(NetworkSpec::sardrn(4), 3);
  zero_params(net);
  ImageF y(12, 12);
  for (std::size_t i = 0; i < y.pixels.size(); ++i) {
    y.pixels[i] = static_cast<double>(i % 7) / 7.0;
  }
  EXPECT_EQ(despeckle(net, y).pixels, y.pixels);
}

TEST(Despeckle, ExactResidualRecoversClean) {
  // phi_hat == c everywhere and y = x + c, so x_hat == x exactly
  Network net = build_sardrn(NetworkSpec::sardrn(4), 3);
  zero_params(net);
  const double c = 0.25;
  net.params[6].bias[0] = c;
  ImageF x(12, 12);
  for (std::size_t i = 0; i < x.pixels.size(); ++i) {
    x.pixels[i] = 0.5 + 0.25 * static_cast<double>(i % 3);
  }
  ImageF y = x;
  for (double& v : y.pixels) v += c;
  EXPECT_EQ(despeckle(net, y).pixels, x.pixels);
}

TEST(ReceptiveField, ClosedFormsAtDepthFour) {
  const ReceptiveFieldReport r = receptive_field(4);
  EXPECT_EQ(r.common_rf, 9);
  EXPECT_EQ(r.dilated_doubling_rf, 31);
}

TEST(ReceptiveField, StandardDilationListGivesThirtyThree) {
  const ReceptiveFieldReport r = receptive_field({1, 2, 3, 4, 3, 2, 1});
  EXPECT_EQ(r.depth, 7);
  EXPECT_EQ(r.config_rf, 33);
}

TEST(ReceptiveField, SingleLayerIsThreeInEveryMode) {
  const ReceptiveFieldReport r = receptive_field({1});
  EXPECT_EQ(r.common_rf, 3);
  EXPECT_EQ(r.dilated_doubling_rf, 3);
  EXPECT_EQ(r.config_rf, 3);
}

TEST(ReceptiveField, EmptyListIsArgumentError) {
  EXPECT_THROW(receptive_field(std::vector<int>{}), ArgumentError);
  EXPECT_THROW(receptive_field(0), ArgumentError);
}

TEST(ReceptiveField, FormulaMatchesImpulsePropagation) {
  const std::vector<std::vector<int>> cases = {
      {1}, {1, 1}, {2, 2}, {1, 2, 3}, {4, 1}, {1, 2, 3, 4, 3, 2, 1},
      {2, 4, 1, 3}, {1, 1, 1, 1, 1, 1, 1}};
  for (const auto& dilations : cases) {
    EXPECT_EQ(impulse_support_width(dilations),
              receptive_field(dilations).config_rf);
  }
}

TEST(Backward, MatchesFiniteDifferencesEndToEnd) {
  // narrowed stack, full parameter set against central differences
  const NetworkSpec spec = NetworkSpec::sardrn(8);
  Network net = build_sardrn(spec, 20260809);

  std::mt19937_64 eng(41);
  Tensor4 y(1, 1, 12, 12);
  for (double& v : y.data) v = rng::uniform01(eng);
  Tensor4 target(1, 1, 12, 12);
  for (double& v : target.data) v = rng::uniform01(eng) - 0.5;

  ForwardTrace trace;
  const Tensor4 pred = forward(net, y, &trace);
  const auto [loss, grad_pred] = mse_residual_loss(pred, target);
  (void)loss;
  const NetworkGrads grads = backward(net, trace, grad_pred);

  auto loss_for = [&](const Network& candidate) {
    const Tensor4 out = forward(candidate, y);
    return mse_residual_loss(out, target).first;
  };

  double worst = 0.0;
  for (std::size_t l = 0; l < net.params.size(); ++l) {
    const auto fd_w = finite_difference_gradient(
        [&](const std::vector<double>& theta) {
          Network candidate = net;
          candidate.params[l].weights = theta;
          return loss_for(candidate);
        },
        net.params[l].weights, 1e-6);
    worst = std::max(worst, max_gradcheck_error(grads.weights[l], fd_w));

    const auto fd_b = finite_difference_gradient(
        [&](const std::vector<double>& theta) {
          Network candidate = net;
          candidate.params[l].bias = theta;
          return loss_for(candidate);
        },
        net.params[l].bias, 1e-6);
    worst = std::max(worst, max_gradcheck_error(grads.bias[l], fd_b));
  }
  EXPECT_LT(worst, 1e-4);
}

}  // namespace
}  // namespace sardrn
