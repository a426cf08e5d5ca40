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

// Randomized check of conv2d_dilated_backward against central finite
// differences. The scalar objective is f = sum(forward(x) .* R) for a fixed
// random projection R, whose exact gradients are the backward pass with
// grad_out = R.

#include <cstdint>
#include <string>
#include <vector>

#include "sardrn/conv.hpp"
#include "sardrn/gradcheck.hpp"
#include "sardrn/rng.hpp"
#include "sardrn/tensor.hpp"

namespace sardrn {

struct GradcheckResult {
  double worst_error = 0.0;
  std::string worst_site;  // e.g. "instance 7 grad_weights[13]"
  int instances = 0;

  bool passes(double tolerance) const { return worst_error < tolerance; }
};

// `instances` random conv problems with batch <= 2, channels <= 3, spatial
// extents 4..8 and dilation 1..4 (pad = dilation), checking grad_weights,
// grad_bias and grad_input component-wise.
inline GradcheckResult run_conv_gradcheck(std::uint64_t seed,
                                          int instances = 20,
                                          double h = 1e-5) {
  std::mt19937_64 eng(rng::splitmix64(seed));
  auto draw = [&](double lo, double hi) {
    return lo + (hi - lo) * rng::uniform01(eng);
  };

  GradcheckResult result;
  result.instances = instances;
  auto consider = [&](double err, const std::string& site) {
    if (err > result.worst_error) {
      result.worst_error = err;
      result.worst_site = site;
    }
  };

  for (int inst = 0; inst < instances; ++inst) {
    const int n = 1 + static_cast<int>(rng::bounded(eng, 2));
    const int cin = 1 + static_cast<int>(rng::bounded(eng, 3));
    const int cout = 1 + static_cast<int>(rng::bounded(eng, 3));
    const int hgt = 4 + static_cast<int>(rng::bounded(eng, 5));
    const int wid = 4 + static_cast<int>(rng::bounded(eng, 5));
    const int d = 1 + static_cast<int>(rng::bounded(eng, 4));

    Tensor4 x(n, cin, hgt, wid);
    for (double& v : x.data) v = draw(-1.0, 1.0);
    ConvLayerParams p(cout, cin, 3, d, d);
    for (double& v : p.weights) v = draw(-1.0, 1.0);
    for (double& v : p.bias) v = draw(-0.5, 0.5);

    Tensor4 projection(n, cout, conv_output_extent(hgt, p),
                       conv_output_extent(wid, p));
    for (double& v : projection.data) v = draw(-1.0, 1.0);

    const auto objective = [&](const Tensor4& input,
                               const ConvLayerParams& params) {
      const Tensor4 out = conv2d_dilated_forward(input, params);
      double total = 0.0;
      for (std::size_t i = 0; i < out.data.size(); ++i) {
        total += out.data[i] * projection.data[i];
      }
      return total;
    };

    const GradBundle analytic = conv2d_dilated_backward(projection, x, p);
    const std::string tag = "instance " + std::to_string(inst);

    {
      auto f = [&](const std::vector<double>& theta) {
        ConvLayerParams q = p;
        q.weights = theta;
        return objective(x, q);
      };
      const auto numeric = finite_difference_gradient(f, p.weights, h);
      std::size_t at = 0;
      consider(max_gradcheck_error(analytic.grad_weights, numeric, &at),
               tag + " grad_weights[" + std::to_string(at) + "]");
    }
    {
      auto f = [&](const std::vector<double>& theta) {
        ConvLayerParams q = p;
        q.bias = theta;
        return objective(x, q);
      };
      const auto numeric = finite_difference_gradient(f, p.bias, h);
      std::size_t at = 0;
      consider(max_gradcheck_error(analytic.grad_bias, numeric, &at),
               tag + " grad_bias[" + std::to_string(at) + "]");
    }
    {
      auto f = [&](const std::vector<double>& theta) {
        Tensor4 input = x;
        input.data = theta;
        return objective(input, p);
      };
      const auto numeric = finite_difference_gradient(f, x.data, h);
      std::size_t at = 0;
      consider(max_gradcheck_error(analytic.grad_input.data, numeric, &at),
               tag + " grad_input[" + std::to_string(at) + "]");
    }
  }
  return result;
}

}  // namespace sardrn
