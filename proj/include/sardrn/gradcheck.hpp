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

// Finite-difference oracle. Independent of the analytic backward passes it
// is used to check: it only ever calls the forward map.

#include <cmath>
#include <functional>
#include <vector>

#include "sardrn/errors.hpp"

namespace sardrn {

// Central differences (f(t + h e_i) - f(t - h e_i)) / (2h) per coordinate.
inline std::vector<double> finite_difference_gradient(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> theta, double h) {
  if (!(h > 0.0)) throw ArgumentError("finite differences: h must be > 0");
  std::vector<double> grad(theta.size(), 0.0);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double saved = theta[i];
    theta[i] = saved + h;
    const double fp = f(theta);
    theta[i] = saved - h;
    const double fm = f(theta);
    theta[i] = saved;
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
      throw NumericError("finite differences: non-finite objective value");
    }
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

// Gradient-check metric: |a - b| / max(1, |a|, |b|). The unit floor keeps
// components whose true gradient is ~0 from amplifying finite-difference
// roundoff into spurious relative error.
inline double gradcheck_relative_error(double analytic, double numeric) {
  const double denom =
      std::max(1.0, std::max(std::fabs(analytic), std::fabs(numeric)));
  return std::fabs(analytic - numeric) / denom;
}

inline double max_gradcheck_error(const std::vector<double>& analytic,
                                  const std::vector<double>& numeric,
                                  std::size_t* argmax = nullptr) {
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double e = gradcheck_relative_error(analytic[i], numeric[i]);
    if (e > worst) {
      worst = e;
      if (argmax) *argmax = i;
    }
  }
  return worst;
}

}  // namespace sardrn
