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

// Image quality metrics: PSNR, SSIM, and the edge-preservation degree based
// on ratios of adjacent pixels (EPD-ROA). All pure and deterministic.

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sardrn/errors.hpp"
#include "sardrn/image.hpp"

namespace sardrn {

// 10*log10(peak^2 / MSE). Identical images give +infinity (distinguished
// sentinel, not an error).
inline double psnr(const ImageF& x, const ImageF& ref, double peak = 1.0) {
  require_same_shape(x, ref, "psnr");
  require_nonempty(x, "psnr");
  if (!(peak > 0.0)) throw ArgumentError("psnr: peak must be > 0");
  double mse = 0.0;
  for (std::size_t i = 0; i < x.pixels.size(); ++i) {
    const double d = x.pixels[i] - ref.pixels[i];
    mse += d * d;
  }
  mse /= static_cast<double>(x.pixels.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

namespace detail {

// 11x11 Gaussian, sigma 1.5, normalized to sum 1.
inline const std::vector<double>& ssim_window_1d() {
  static const std::vector<double> window = [] {
    std::vector<double> w(11);
    double sum = 0.0;
    for (int i = 0; i < 11; ++i) {
      const double d = static_cast<double>(i - 5);
      w[static_cast<std::size_t>(i)] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
      sum += w[static_cast<std::size_t>(i)];
    }
    for (double& v : w) v /= sum;
    return w;
  }();
  return window;
}

// Separable valid-mode Gaussian filtering: rows first, then columns.
// Input H x W, output (H-10) x (W-10).
inline std::vector<double> gaussian_filter_valid(const std::vector<double>& img,
                                                 int h, int w) {
  const auto& win = ssim_window_1d();
  const int wo = w - 10;
  const int ho = h - 10;
  std::vector<double> rows(static_cast<std::size_t>(h) * wo);
  for (int r = 0; r < h; ++r) {
    const double* src = img.data() + static_cast<std::size_t>(r) * w;
    double* dst = rows.data() + static_cast<std::size_t>(r) * wo;
    for (int c = 0; c < wo; ++c) {
      double acc = 0.0;
      for (int k = 0; k < 11; ++k) acc += win[static_cast<std::size_t>(k)] * src[c + k];
      dst[c] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(ho) * wo);
  for (int r = 0; r < ho; ++r) {
    double* dst = out.data() + static_cast<std::size_t>(r) * wo;
    for (int c = 0; c < wo; ++c) {
      double acc = 0.0;
      for (int k = 0; k < 11; ++k) {
        acc += win[static_cast<std::size_t>(k)] *
               rows[static_cast<std::size_t>(r + k) * wo + c];
      }
      dst[c] = acc;
    }
  }
  return out;
}

}  // namespace detail

// Mean local SSIM over sliding 11x11 Gaussian windows (sigma 1.5),
// stabilizers C1 = (0.01*peak)^2 and C2 = (0.03*peak)^2, the standard
// luminance-contrast-structure product.
inline double ssim(const ImageF& x, const ImageF& ref, double peak = 1.0) {
  require_same_shape(x, ref, "ssim");
  if (x.height < 11 || x.width < 11) {
    throw ArgumentError("ssim: image smaller than the 11x11 window");
  }
  if (!(peak > 0.0)) throw ArgumentError("ssim: peak must be > 0");
  const double c1 = (0.01 * peak) * (0.01 * peak);
  const double c2 = (0.03 * peak) * (0.03 * peak);

  const int h = x.height;
  const int w = x.width;
  const std::size_t npix = x.pixels.size();
  std::vector<double> xx(npix), yy(npix), xy(npix);
  for (std::size_t i = 0; i < npix; ++i) {
    xx[i] = x.pixels[i] * x.pixels[i];
    yy[i] = ref.pixels[i] * ref.pixels[i];
    xy[i] = x.pixels[i] * ref.pixels[i];
  }
  const auto mu1 = detail::gaussian_filter_valid(x.pixels, h, w);
  const auto mu2 = detail::gaussian_filter_valid(ref.pixels, h, w);
  const auto m11 = detail::gaussian_filter_valid(xx, h, w);
  const auto m22 = detail::gaussian_filter_valid(yy, h, w);
  const auto m12 = detail::gaussian_filter_valid(xy, h, w);

  double total = 0.0;
  for (std::size_t i = 0; i < mu1.size(); ++i) {
    const double u1 = mu1[i];
    const double u2 = mu2[i];
    const double s1 = m11[i] - u1 * u1;
    const double s2 = m22[i] - u2 * u2;
    const double s12 = m12[i] - u1 * u2;
    total += ((2.0 * u1 * u2 + c1) * (2.0 * s12 + c2)) /
             ((u1 * u1 + u2 * u2 + c1) * (s1 + s2 + c2));
  }
  return total / static_cast<double>(mu1.size());
}

enum class EpdDirection { kHorizontal, kVertical };

namespace detail {

// Values are floored at 1e-6 before division so dark pixels cannot divide
// by zero.
constexpr double kEpdFloor = 1e-6;

inline double epd_ratio_sum(const ImageF& img, EpdDirection dir) {
  double sum = 0.0;
  const int dr = dir == EpdDirection::kVertical ? 1 : 0;
  const int dc = dir == EpdDirection::kHorizontal ? 1 : 0;
  for (int r = 0; r + dr < img.height; ++r) {
    for (int c = 0; c + dc < img.width; ++c) {
      const double a = std::max(img.at(r, c), kEpdFloor);
      const double b = std::max(img.at(r + dr, c + dc), kEpdFloor);
      sum += std::fabs(a / b);
    }
  }
  return sum;
}

}  // namespace detail

// EPD-ROA: sum over adjacent in-bounds pairs of |filtered(i)/filtered(adj)|
// divided by the same sum over the original. 1.0 means perfectly preserved
// edges; the ratio form makes the value invariant to positive scaling of
// the filtered image.
inline double epd_roa(const ImageF& filtered, const ImageF& original,
                      EpdDirection direction) {
  require_same_shape(filtered, original, "epd_roa");
  if (direction == EpdDirection::kHorizontal) {
    if (original.width < 2)
      throw ArgumentError("epd_roa: width axis < 2, no horizontal pairs");
    for (int r = 0; r < original.height; ++r) {
      bool all_zero = true;
      for (int c = 0; c < original.width && all_zero; ++c) {
        if (original.at(r, c) != 0.0) all_zero = false;
      }
      if (all_zero) {
        throw DegenerateInputError("epd_roa: all-zero original row " +
                                   std::to_string(r));
      }
    }
  } else {
    if (original.height < 2)
      throw ArgumentError("epd_roa: height axis < 2, no vertical pairs");
    for (int c = 0; c < original.width; ++c) {
      bool all_zero = true;
      for (int r = 0; r < original.height && all_zero; ++r) {
        if (original.at(r, c) != 0.0) all_zero = false;
      }
      if (all_zero) {
        throw DegenerateInputError("epd_roa: all-zero original column " +
                                   std::to_string(c));
      }
    }
  }
  return detail::epd_ratio_sum(filtered, direction) /
         detail::epd_ratio_sum(original, direction);
}

struct MetricReport {
  double psnr_db = 0.0;
  double ssim = 0.0;
  double epd_roa_h = 0.0;
  double epd_roa_v = 0.0;
  std::vector<std::pair<std::string, double>> enl;

  double epd_roa_mean() const { return 0.5 * (epd_roa_h + epd_roa_v); }

  // Stable schema; downstream tooling parses this, never the table.
  static std::string csv_header() {
    return "ref,test,psnr_db,ssim,epd_roa_h,epd_roa_v,epd_roa_mean,enl";
  }

  std::string csv_row(const std::string& ref_name,
                      const std::string& test_name) const {
    std::ostringstream os;
    os << ref_name << ',' << test_name << ',' << std::setprecision(12)
       << psnr_db << ',' << ssim << ',' << epd_roa_h << ',' << epd_roa_v
       << ',' << epd_roa_mean() << ',';
    for (std::size_t i = 0; i < enl.size(); ++i) {
      if (i) os << ';';
      os << enl[i].first << '=' << enl[i].second;
    }
    return os.str();
  }

  std::string table() const {
    std::ostringstream os;
    os << std::setprecision(6) << std::fixed;
    os << std::left << std::setw(16) << "metric" << "value\n";
    os << std::left << std::setw(16) << "psnr_db" << psnr_db << '\n';
    os << std::left << std::setw(16) << "ssim" << ssim << '\n';
    os << std::left << std::setw(16) << "epd_roa_h" << epd_roa_h << '\n';
    os << std::left << std::setw(16) << "epd_roa_v" << epd_roa_v << '\n';
    os << std::left << std::setw(16) << "epd_roa_mean" << epd_roa_mean()
       << '\n';
    for (const auto& [label, value] : enl) {
      os << std::left << std::setw(16) << ("enl[" + label + "]") << value
         << '\n';
    }
    return os.str();
  }
};

}  // namespace sardrn
