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

// Acceptance suite: one pass/fail line per criterion, exit 0 only if all
// pass. The training-based criteria run a desk-scale stack (full 7-layer
// topology, feature layers narrowed for single-core budgets).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "sardrn/sardrn.hpp"

namespace {

using sardrn::ImageF;
using sardrn::Network;
using sardrn::NetworkSpec;
using sardrn::Tensor4;
using sardrn::TrainConfig;

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// ---------------------------------------------------------------------------
// 1. conv backward vs finite differences

bool criterion1(std::string& detail) {
  const double t0 = now_seconds();
  const sardrn::GradcheckResult result =
      sardrn::run_conv_gradcheck(/*seed=*/1357, /*instances=*/20, 1e-5);
  const double elapsed = now_seconds() - t0;
  std::ostringstream os;
  os << "worst " << result.worst_error << " at " << result.worst_site << ", "
     << elapsed << " s";
  detail = os.str();
  return result.passes(1e-5) && elapsed < 30.0;
}

// ---------------------------------------------------------------------------
// 2. end-to-end network gradient (8-channel stack, 1x1x12x12)

bool criterion2(std::string& detail) {
  const NetworkSpec spec = NetworkSpec::sardrn(8);
  Network net = sardrn::build_sardrn(spec, 20260809);

  std::mt19937_64 eng(41);
  Tensor4 y(1, 1, 12, 12);
  for (double& v : y.data) v = sardrn::rng::uniform01(eng);
  Tensor4 target(1, 1, 12, 12);
  for (double& v : target.data) v = sardrn::rng::uniform01(eng) - 0.5;

  sardrn::ForwardTrace trace;
  const Tensor4 pred = sardrn::forward(net, y, &trace);
  const auto [loss, grad_pred] = sardrn::mse_residual_loss(pred, target);
  (void)loss;
  const sardrn::NetworkGrads grads = sardrn::backward(net, trace, grad_pred);

  auto loss_for = [&](const Network& candidate) {
    return sardrn::mse_residual_loss(sardrn::forward(candidate, y), target)
        .first;
  };

  double worst = 0.0;
  for (std::size_t l = 0; l < net.params.size(); ++l) {
    const auto fd_w = sardrn::finite_difference_gradient(
        [&](const std::vector<double>& theta) {
          Network candidate = net;
          candidate.params[l].weights = theta;
          return loss_for(candidate);
        },
        net.params[l].weights, 1e-6);
    worst = std::max(worst, sardrn::max_gradcheck_error(grads.weights[l], fd_w));
    const auto fd_b = sardrn::finite_difference_gradient(
        [&](const std::vector<double>& theta) {
          Network candidate = net;
          candidate.params[l].bias = theta;
          return loss_for(candidate);
        },
        net.params[l].bias, 1e-6);
    worst = std::max(worst, sardrn::max_gradcheck_error(grads.bias[l], fd_b));
  }
  std::ostringstream os;
  os << "worst relative error " << worst << " over "
     << net.parameter_count() << " parameters";
  detail = os.str();
  return worst < 1e-4;
}

// ---------------------------------------------------------------------------
// 3. speckle moments and ENL

bool criterion3(std::string& detail) {
  std::ostringstream os;
  bool ok = true;
  for (double looks : {1.0, 2.0, 4.0, 8.0}) {
    const ImageF field =
        sardrn::sample_speckle_field(1000, 1000, {looks, 424242});
    double mean = 0.0;
    for (double v : field.pixels) mean += v;
    mean /= 1e6;
    double var = 0.0;
    for (double v : field.pixels) var += (v - mean) * (v - mean);
    var /= 1e6;
    const bool mean_ok = std::fabs(mean - 1.0) < 0.005;
    const bool var_ok = std::fabs(var - 1.0 / looks) * looks < 0.02;
    ok = ok && mean_ok && var_ok;
    os << "L=" << looks << " mean=" << mean << " var=" << var << "; ";
  }
  const ImageF constant(512, 512, 1.0);
  const ImageF speckled = sardrn::apply_speckle(constant, {4.0, 31337});
  const double estimate =
      sardrn::enl(speckled, sardrn::EnlDefinition::kMeanSquaredOverVar);
  os << "ENL(L=4)=" << estimate;
  detail = os.str();
  return ok && estimate >= 3.8 && estimate <= 4.2;
}

// ---------------------------------------------------------------------------
// 4. receptive fields, closed forms vs impulse propagation

int impulse_support(const std::vector<int>& dilations) {
  NetworkSpec spec;
  for (int d : dilations) {
    sardrn::LayerSpec layer;
    layer.out_channels = 1;
    layer.dilation = d;
    layer.pad = d;
    layer.activation = sardrn::Activation::kNone;
    spec.layers.push_back(layer);
  }
  Network net = sardrn::build_sardrn(spec, 0);
  for (auto& p : net.params) {
    std::fill(p.weights.begin(), p.weights.end(), 1.0);
  }
  int span = 1;
  for (int d : dilations) span += 2 * d;
  const int extent = span + 7 - (span % 2);  // odd, with margin
  Tensor4 x(1, 1, extent, extent);
  x.at(0, 0, extent / 2, extent / 2) = 1.0;
  const Tensor4 out = sardrn::forward(net, x);
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

bool criterion4(std::string& detail) {
  const auto depth4 = sardrn::receptive_field(4);
  const std::vector<int> standard{1, 2, 3, 4, 3, 2, 1};
  const auto config = sardrn::receptive_field(standard);
  const int measured = impulse_support(standard);
  std::ostringstream os;
  os << "common(4)=" << depth4.common_rf << " doubling(4)="
     << depth4.dilated_doubling_rf << " config=" << config.config_rf
     << " impulse=" << measured;
  detail = os.str();
  return depth4.common_rf == 9 && depth4.dilated_doubling_rf == 31 &&
         config.config_rf == 33 && measured == 33;
}

// ---------------------------------------------------------------------------
// 5. patch extraction count (and the documented 64-patch discrepancy with
//    the commonly quoted 193,664 figure for 400 such images)

bool criterion5(std::string& detail) {
  const ImageF img(256, 256, 0.5);
  const std::size_t per_image = sardrn::extract_patches(img, 40, 10).size();
  const long formula_total = 400L * static_cast<long>(per_image);
  const long quoted_total = 193664;
  std::ostringstream os;
  os << "per-image " << per_image << ", 400 images -> " << formula_total
     << " (expected mismatch vs quoted " << quoted_total << ": "
     << quoted_total - formula_total << ")";
  detail = os.str();
  // the sliding-window formula is normative; the quoted figure differs by
  // exactly 64
  return per_image == 484 && formula_total == 193600 &&
         quoted_total - formula_total == 64;
}

// ---------------------------------------------------------------------------
// 6. verbatim Adam step and learning-rate schedule

bool criterion6(std::string& detail) {
  TrainConfig cfg;
  std::vector<double> theta{0.0};
  std::vector<double> m{0.0};
  std::vector<double> n{0.0};
  sardrn::adam_step(theta, {1.0}, m, n, 1, 0.01, cfg, "scalar");
  const bool step_ok = std::fabs(theta[0] - (-3.16228e-2)) < 1e-7;
  const bool lr_ok = sardrn::lr_at_epoch(0, cfg) == 0.01 &&
                     sardrn::lr_at_epoch(10, cfg) == 0.005 &&
                     sardrn::lr_at_epoch(49, cfg) == 0.000625;
  std::ostringstream os;
  os << "step " << theta[0] << ", lr(0/10/49) = "
     << sardrn::lr_at_epoch(0, cfg) << "/" << sardrn::lr_at_epoch(10, cfg)
     << "/" << sardrn::lr_at_epoch(49, cfg);
  detail = os.str();
  return step_ok && lr_ok;
}

// ---------------------------------------------------------------------------
// 7 & 8. toy training and the dilation/skip ablation

struct ToyRunResult {
  double loss_first100 = 0.0;
  double loss_last100 = 0.0;
  double speckled_psnr = 0.0;
  double despeckled_psnr = 0.0;
  double speckled_ssim = 0.0;
  double despeckled_ssim = 0.0;
  double seconds = 0.0;
  long iterations = 0;
};

// Feature-layer width for the toy runs. The topology is the full 7-layer
// SAR-DRN; the width is narrowed so 2000 iterations fit a single-core
// desk budget (same precedent as the 8-channel gradient criterion).
constexpr int kToyChannels = 8;
constexpr std::uint64_t kToySeed = 20260401;

TrainConfig toy_config() {
  TrainConfig cfg;
  cfg.looks = 1.0;
  cfg.patch_size = 40;
  cfg.stride = 10;
  cfg.batch_size = 32;
  cfg.epochs = 1000000;  // iteration budget is the stop condition
  cfg.max_iterations = 2000;
  cfg.lr0 = 0.01;
  cfg.lr_decay = 0.5;
  cfg.decay_interval_epochs = 130;  // ~every 390 iterations here
  cfg.seed = kToySeed;
  return cfg;
}

ToyRunResult run_toy(const NetworkSpec& spec) {
  const auto dataset = sardrn::make_toy_dataset(9001, 16, 64);
  const TrainConfig cfg = toy_config();

  const double t0 = now_seconds();
  const sardrn::TrainResult result = sardrn::train(dataset, cfg, spec);
  ToyRunResult out;
  out.seconds = now_seconds() - t0;
  out.iterations = static_cast<long>(result.loss_history.size());

  const std::size_t count = result.loss_history.size();
  for (std::size_t i = 0; i < 100 && i < count; ++i) {
    out.loss_first100 += result.loss_history[i].loss / 100.0;
    out.loss_last100 += result.loss_history[count - 1 - i].loss / 100.0;
  }

  // held-out evaluation; reconstruct the per-image validation noise from
  // the documented streams
  double n_val = 0.0;
  for (std::size_t i = 0; i < result.validation_image_indices.size(); ++i) {
    const ImageF& clean = dataset[result.validation_image_indices[i]];
    const sardrn::SpeckleConfig noise{
        cfg.looks, sardrn::rng::stream_seed(
                       cfg.seed, sardrn::rng::Stream::kValidationNoise,
                       static_cast<std::uint64_t>(i))};
    const ImageF speckled = sardrn::apply_speckle(clean, noise);
    const ImageF restored = sardrn::despeckle(result.net, speckled);
    out.speckled_psnr += sardrn::psnr(speckled, clean);
    out.despeckled_psnr += sardrn::psnr(restored, clean);
    out.speckled_ssim += sardrn::ssim(speckled, clean);
    out.despeckled_ssim += sardrn::ssim(restored, clean);
    n_val += 1.0;
  }
  out.speckled_psnr /= n_val;
  out.despeckled_psnr /= n_val;
  out.speckled_ssim /= n_val;
  out.despeckled_ssim /= n_val;
  return out;
}

ToyRunResult g_toy_full;  // shared between criteria 7 and 8
bool g_toy_full_ran = false;

bool criterion7(std::string& detail) {
  g_toy_full = run_toy(NetworkSpec::sardrn(kToyChannels));
  g_toy_full_ran = true;
  const ToyRunResult& r = g_toy_full;
  std::ostringstream os;
  os << "loss " << r.loss_first100 << " -> " << r.loss_last100 << ", psnr "
     << r.speckled_psnr << " -> " << r.despeckled_psnr << " dB, ssim "
     << r.speckled_ssim << " -> " << r.despeckled_ssim << ", "
     << r.iterations << " iters in " << r.seconds << " s";
  detail = os.str();
  return r.iterations == 2000 && r.seconds < 1200.0 &&
         r.loss_last100 < 0.5 * r.loss_first100 &&
         r.despeckled_psnr - r.speckled_psnr >= 3.0 &&
         r.despeckled_ssim > r.speckled_ssim;
}

bool criterion8(std::string& detail) {
  if (!g_toy_full_ran) {
    detail = "criterion 7 run unavailable";
    return false;
  }
  NetworkSpec ablated = NetworkSpec::sardrn(kToyChannels);
  for (auto& layer : ablated.layers) {
    layer.dilation = 1;
    layer.pad = 1;
  }
  ablated.skips.clear();
  const ToyRunResult r = run_toy(ablated);
  const double gap = g_toy_full.despeckled_psnr - r.despeckled_psnr;
  std::ostringstream os;
  os << "dilations+skips " << g_toy_full.despeckled_psnr
     << " dB vs plain " << r.despeckled_psnr << " dB (gap " << gap
     << " dB), " << r.seconds << " s";
  detail = os.str();
  return gap >= 0.3;
}

// ---------------------------------------------------------------------------
// 9. model serialization

bool criterion9(std::string& detail) {
  const Network net = sardrn::build_sardrn(NetworkSpec::sardrn(4), 505);
  const auto bytes = sardrn::serialize_model(net);
  const Network loaded = sardrn::deserialize_model(bytes, net.spec.skips);

  std::mt19937_64 eng(6);
  Tensor4 y(1, 1, 24, 24);
  for (double& v : y.data) v = sardrn::rng::uniform01(eng);
  const Tensor4 a = sardrn::forward(net, y);
  const Tensor4 b = sardrn::forward(loaded, y);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    worst = std::max(worst, std::fabs(a.data[i] - b.data[i]) /
                                std::max(1.0, std::fabs(a.data[i])));
  }
  const bool outputs_ok = worst < 1e-6;
  const bool bytes_ok = sardrn::serialize_model(loaded) == bytes;

  bool corrupt_ok = false;
  {
    auto evil = bytes;
    evil[evil.size() / 3] ^= 0x10;
    try {
      sardrn::deserialize_model(evil, net.spec.skips);
    } catch (const sardrn::ModelCrcError&) {
      corrupt_ok = true;
    }
  }
  bool truncate_ok = false;
  {
    std::vector<unsigned char> cut(bytes.begin(),
                                   bytes.begin() +
                                       static_cast<long>(bytes.size() / 2));
    try {
      sardrn::deserialize_model(cut, net.spec.skips);
    } catch (const sardrn::ModelCrcError&) {
      truncate_ok = true;
    } catch (const sardrn::ModelFormatError&) {
      truncate_ok = true;
    }
  }
  std::ostringstream os;
  os << "forward drift " << worst << ", byte-identical resave "
     << (bytes_ok ? "yes" : "NO") << ", corruption typed "
     << (corrupt_ok && truncate_ok ? "yes" : "NO");
  detail = os.str();
  return outputs_ok && bytes_ok && corrupt_ok && truncate_ok;
}

// ---------------------------------------------------------------------------
// 10. metric identities

bool criterion10(std::string& detail) {
  std::mt19937_64 eng(8);
  ImageF x(24, 24);
  for (double& v : x.pixels) v = 0.1 + 0.9 * sardrn::rng::uniform01(eng);

  const double self_ssim = sardrn::ssim(x, x);
  const bool ssim_ok = std::fabs(self_ssim - 1.0) < 1e-12;

  ImageF shifted = x;
  for (double& v : shifted.pixels) v += 0.1;
  const double psnr_value = sardrn::psnr(shifted, x);
  const bool psnr_ok = std::fabs(psnr_value - 20.0) < 1e-9;

  ImageF reference(16, 16);
  for (double& v : reference.pixels) {
    v = 0.1 + 0.9 * sardrn::rng::uniform01(eng);
  }
  const bool epd_identity_ok =
      sardrn::epd_roa(reference, reference,
                      sardrn::EpdDirection::kHorizontal) == 1.0 &&
      sardrn::epd_roa(reference, reference, sardrn::EpdDirection::kVertical) ==
          1.0;

  ImageF filtered(16, 16);
  for (double& v : filtered.pixels) {
    v = 0.1 + 0.9 * sardrn::rng::uniform01(eng);
  }
  const double base =
      sardrn::epd_roa(filtered, reference, sardrn::EpdDirection::kHorizontal);
  bool scale_ok = true;
  for (double scale : {2.0, 0.5, 7.3}) {
    ImageF scaled = filtered;
    for (double& v : scaled.pixels) v *= scale;
    const double value = sardrn::epd_roa(scaled, reference,
                                         sardrn::EpdDirection::kHorizontal);
    if (std::fabs(value - base) > 1e-12 * std::max(1.0, base)) {
      scale_ok = false;
    }
  }
  std::ostringstream os;
  os << "ssim(x,x)=" << self_ssim << ", psnr=" << psnr_value
     << " dB, epd identity/scaling "
     << ((epd_identity_ok && scale_ok) ? "exact" : "BROKEN");
  detail = os.str();
  return ssim_ok && psnr_ok && epd_identity_ok && scale_ok;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "conv gradients match finite differences", criterion1},
      {2, "end-to-end network gradient", criterion2},
      {3, "speckle moments and ENL", criterion3},
      {4, "receptive fields (closed forms + impulse oracle)", criterion4},
      {5, "patch extraction count", criterion5},
      {6, "verbatim Adam step and LR schedule", criterion6},
      {7, "toy training improves loss, PSNR and SSIM", criterion7},
      {8, "dilations+skips beat the plain ablation", criterion8},
      {9, "model serialization round trip", criterion9},
      {10, "metric identities", criterion10},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL",
                criterion.id, criterion.name, detail.empty() ? "" : " -- ",
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (failures) {
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
