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

// Patch-based residual training. The pipeline: extract_patches ->
// make_training_pair -> shuffled mini-batches -> forward -> MSE residual
// loss -> backward -> Adam. Everything is seeded and single-ordered, so a
// (dataset, config) pair reproduces its loss history bit for bit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "sardrn/errors.hpp"
#include "sardrn/image.hpp"
#include "sardrn/metrics.hpp"
#include "sardrn/network.hpp"
#include "sardrn/rng.hpp"
#include "sardrn/speckle.hpp"
#include "sardrn/tensor.hpp"

namespace sardrn {

struct TrainConfig {
  double looks = 1.0;
  int patch_size = 40;
  int stride = 10;
  int batch_size = 128;
  int epochs = 50;
  double lr0 = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double lr_decay = 0.5;  // gamma
  int decay_interval_epochs = 10;
  std::uint64_t seed = 0;
  // The update equations above omit bias correction; this flag enables the
  // standard corrected form instead.
  bool adam_bias_correction = false;
  // Extra stop knob for fixed-budget runs; 0 = run all epochs.
  long max_iterations = 0;
  // Re-draw speckle every epoch instead of fixing one noisy copy per patch.
  bool redraw_noise_each_epoch = false;
  // Test hook: forces the speckle field to exactly 1 (noise-free pairs).
  bool unit_noise_hook = false;
};

inline void validate_train_config(const TrainConfig& cfg) {
  if (cfg.patch_size < 1) throw ConfigError("train: patch_size must be >= 1");
  if (cfg.stride < 1) throw ConfigError("train: stride must be >= 1");
  if (cfg.batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
  if (cfg.epochs < 0) throw ConfigError("train: epochs must be >= 0");
  if (!(cfg.lr0 > 0.0)) throw ConfigError("train: lr0 must be > 0");
  if (!(cfg.lr_decay > 0.0)) throw ConfigError("train: lr_decay must be > 0");
  if (cfg.decay_interval_epochs < 1)
    throw ConfigError("train: decay_interval_epochs must be >= 1");
  if (!(cfg.epsilon > 0.0)) throw ConfigError("train: epsilon must be > 0");
  if (!(cfg.beta1 > 0.0 && cfg.beta1 < 1.0))
    throw ConfigError("train: beta1 must be in (0,1)");
  if (!(cfg.beta2 > 0.0 && cfg.beta2 < 1.0))
    throw ConfigError("train: beta2 must be in (0,1)");
  if (!(cfg.looks >= 1.0)) throw ConfigError("train: looks must be >= 1");
}

// Sliding-window patches at top-left offsets {0, stride, 2*stride, ...}
// while the patch fits; count per axis = floor((dim - patch)/stride) + 1.
inline std::vector<ImageF> extract_patches(const ImageF& img, int patch_size,
                                           int stride) {
  require_nonempty(img, "extract_patches");
  if (patch_size < 1) throw ArgumentError("extract_patches: patch_size < 1");
  if (stride < 1) throw ArgumentError("extract_patches: stride < 1");
  if (patch_size > img.height || patch_size > img.width) {
    throw ArgumentError("extract_patches: patch " +
                        std::to_string(patch_size) +
                        " larger than image " + std::to_string(img.height) +
                        "x" + std::to_string(img.width));
  }
  const int ny = (img.height - patch_size) / stride + 1;
  const int nx = (img.width - patch_size) / stride + 1;
  std::vector<ImageF> patches;
  patches.reserve(static_cast<std::size_t>(ny) * nx);
  for (int py = 0; py < ny; ++py) {
    for (int px = 0; px < nx; ++px) {
      patches.push_back(
          crop(img, px * stride, py * stride, patch_size, patch_size));
    }
  }
  return patches;
}

// speckled = clean .* n, residual_target = speckled - clean. All three
// patches share dimensions; the pair is a pure function of (clean, cfg).
struct TrainingPair {
  Tensor4 speckled;
  Tensor4 residual_target;
  Tensor4 clean;
};

inline TrainingPair make_training_pair(const ImageF& clean_patch,
                                       const SpeckleConfig& cfg,
                                       bool unit_noise = false) {
  const ImageF speckled =
      unit_noise ? clean_patch : apply_speckle(clean_patch, cfg);
  TrainingPair pair;
  pair.clean = image_to_tensor(clean_patch);
  pair.speckled = image_to_tensor(speckled);
  pair.residual_target = pair.speckled;
  for (std::size_t i = 0; i < pair.residual_target.data.size(); ++i) {
    pair.residual_target.data[i] -= pair.clean.data[i];
  }
  return pair;
}

// loss = 1/(2N) * sum_i ||pred_i - target_i||^2 over the batch,
// grad_pred = (pred - target) / N.
inline std::pair<double, Tensor4> mse_residual_loss(const Tensor4& pred,
                                                    const Tensor4& target) {
  require_same_shape(pred, target, "mse_residual_loss");
  if (pred.n < 1) throw ShapeError("mse_residual_loss: batch axis < 1");
  const double inv_n = 1.0 / static_cast<double>(pred.n);
  Tensor4 grad = pred;
  double sumsq = 0.0;
  for (std::size_t i = 0; i < grad.data.size(); ++i) {
    const double diff = pred.data[i] - target.data[i];
    sumsq += diff * diff;
    grad.data[i] = diff * inv_n;
  }
  return {0.5 * inv_n * sumsq, std::move(grad)};
}

// Optimizer state; one (m, n) slot per parameter array, t = step counter.
struct AdamState {
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> n;
  std::uint64_t t = 0;

  static AdamState zeros_like(const Network& net) {
    AdamState state;
    for (const auto& p : net.params) {
      state.m.push_back(std::vector<double>(p.weights.size(), 0.0));
      state.n.push_back(std::vector<double>(p.weights.size(), 0.0));
      state.m.push_back(std::vector<double>(p.bias.size(), 0.0));
      state.n.push_back(std::vector<double>(p.bias.size(), 0.0));
    }
    return state;
  }
};

// One Adam update on a flat parameter array:
//   m_t = b1*m + (1-b1)*g,  n_t = b2*n + (1-b2)*g^2,
//   theta -= lr * m_t / (sqrt(n_t) + eps)
// `t` is the step number (>= 1); with adam_bias_correction set, m_t and n_t
// are divided by (1 - b1^t) and (1 - b2^t) first.
inline void adam_step(std::vector<double>& params,
                      const std::vector<double>& grads,
                      std::vector<double>& m, std::vector<double>& n,
                      std::uint64_t t, double lr, const TrainConfig& cfg,
                      const std::string& param_id) {
  if (!(lr > 0.0)) throw ArgumentError("adam_step: lr must be > 0");
  if (params.size() != grads.size() || params.size() != m.size() ||
      params.size() != n.size()) {
    throw ShapeError("adam_step: parameter/gradient/state size mismatch for " +
                     param_id);
  }
  double corr1 = 1.0;
  double corr2 = 1.0;
  if (cfg.adam_bias_correction) {
    corr1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
    corr2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    if (!std::isfinite(g)) {
      throw NumericError("adam_step: non-finite gradient in " + param_id +
                         "[" + std::to_string(i) + "]");
    }
    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
    n[i] = cfg.beta2 * n[i] + (1.0 - cfg.beta2) * g * g;
    const double mhat = m[i] / corr1;
    const double nhat = n[i] / corr2;
    params[i] -= lr * mhat / (std::sqrt(nhat) + cfg.epsilon);
  }
}

// Whole-network Adam step; increments state.t once.
inline void adam_step(Network& net, const NetworkGrads& grads,
                      AdamState& state, double lr, const TrainConfig& cfg) {
  state.t += 1;
  for (std::size_t l = 0; l < net.params.size(); ++l) {
    const std::string layer_id = "layer" + std::to_string(l + 1);
    adam_step(net.params[l].weights, grads.weights[l], state.m[2 * l],
              state.n[2 * l], state.t, lr, cfg, layer_id + ".weights");
    adam_step(net.params[l].bias, grads.bias[l], state.m[2 * l + 1],
              state.n[2 * l + 1], state.t, lr, cfg, layer_id + ".bias");
  }
}

// Plain gradient descent: theta -= lr * g.
inline void sgd_step(std::vector<double>& params,
                     const std::vector<double>& grads, double lr,
                     const std::string& param_id) {
  if (!(lr > 0.0)) throw ArgumentError("sgd_step: lr must be > 0");
  if (params.size() != grads.size()) {
    throw ShapeError("sgd_step: parameter/gradient size mismatch for " +
                     param_id);
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!std::isfinite(grads[i])) {
      throw NumericError("sgd_step: non-finite gradient in " + param_id + "[" +
                         std::to_string(i) + "]");
    }
    params[i] -= lr * grads[i];
  }
}

inline void sgd_step(Network& net, const NetworkGrads& grads, double lr) {
  for (std::size_t l = 0; l < net.params.size(); ++l) {
    const std::string layer_id = "layer" + std::to_string(l + 1);
    sgd_step(net.params[l].weights, grads.weights[l], lr,
             layer_id + ".weights");
    sgd_step(net.params[l].bias, grads.bias[l], lr, layer_id + ".bias");
  }
}

// Step decay: lr0 * gamma^floor(epoch / interval).
inline double lr_at_epoch(int epoch, const TrainConfig& cfg) {
  if (epoch < 0) throw ArgumentError("lr_at_epoch: epoch must be >= 0");
  return cfg.lr0 *
         std::pow(cfg.lr_decay, epoch / cfg.decay_interval_epochs);
}

struct IterationRecord {
  long iteration = 0;  // 1-based
  int epoch = 0;       // 0-based
  double lr = 0.0;
  double loss = 0.0;
};

struct ValidationRecord {
  int epoch = 0;
  double psnr_db = 0.0;
};

struct TrainResult {
  Network net;
  std::vector<IterationRecord> loss_history;
  std::vector<ValidationRecord> validation_history;
  std::vector<std::size_t> validation_image_indices;  // into the dataset
};

namespace detail {

inline Tensor4 assemble_batch(const std::vector<TrainingPair>& pairs,
                              const std::vector<std::size_t>& order,
                              std::size_t first, int batch_size,
                              bool targets) {
  const Tensor4& proto = pairs[order[first]].speckled;
  Tensor4 batch(batch_size, 1, proto.h, proto.w);
  const std::size_t plane = proto.data.size();
  for (int b = 0; b < batch_size; ++b) {
    const TrainingPair& pair = pairs[order[first + static_cast<std::size_t>(b)]];
    const Tensor4& src = targets ? pair.residual_target : pair.speckled;
    std::copy(src.data.begin(), src.data.end(),
              batch.data.begin() + static_cast<std::size_t>(b) * plane);
  }
  return batch;
}

}  // namespace detail

// Full training loop. Patches are cropped from the non-held-out images in
// file order, each speckled once with its own rng stream (index = global
// patch ordinal), shuffled per epoch, and consumed in batches of
// cfg.batch_size; a trailing partial batch is dropped so every update
// averages over the same count. 10% of the images (at least one, when there
// are two or more) are held out by seeded choice and scored by PSNR after
// every epoch. `warm_start` resumes from an existing network instead of a
// fresh seeded initialization; its spec then replaces `spec`.
inline TrainResult train(
    const std::vector<ImageF>& dataset, const TrainConfig& cfg,
    const NetworkSpec& spec,
    const std::function<void(const IterationRecord&)>& on_iteration = {},
    const Network* warm_start = nullptr) {
  validate_train_config(cfg);
  if (dataset.empty()) throw ConfigError("train: empty dataset");

  // held-out split
  std::vector<std::size_t> image_order(dataset.size());
  std::iota(image_order.begin(), image_order.end(), std::size_t{0});
  std::size_t n_val = 0;
  if (dataset.size() >= 2) {
    auto eng = rng::make_engine(cfg.seed, rng::Stream::kValidationSplit);
    rng::shuffle(image_order, eng);
    n_val = std::max<std::size_t>(
        1, static_cast<std::size_t>(
               std::llround(0.1 * static_cast<double>(dataset.size()))));
    n_val = std::min(n_val, dataset.size() - 1);
  }
  std::vector<std::size_t> val_indices(image_order.begin(),
                                       image_order.begin() + n_val);
  std::vector<std::size_t> train_indices(image_order.begin() + n_val,
                                         image_order.end());
  std::sort(val_indices.begin(), val_indices.end());
  std::sort(train_indices.begin(), train_indices.end());

  // clean patches, in (image, row-major window) order
  std::vector<ImageF> clean_patches;
  for (std::size_t idx : train_indices) {
    auto patches = extract_patches(dataset[idx], cfg.patch_size, cfg.stride);
    for (auto& p : patches) clean_patches.push_back(std::move(p));
  }
  if (clean_patches.size() < static_cast<std::size_t>(cfg.batch_size)) {
    throw ConfigError("train: dataset smaller than one batch (" +
                      std::to_string(clean_patches.size()) + " patches < " +
                      std::to_string(cfg.batch_size) + ")");
  }

  auto build_pairs = [&](int epoch) {
    std::vector<TrainingPair> pairs;
    pairs.reserve(clean_patches.size());
    for (std::size_t k = 0; k < clean_patches.size(); ++k) {
      const std::uint64_t stream_index =
          cfg.redraw_noise_each_epoch
              ? k + (static_cast<std::uint64_t>(epoch) + 1) * 0x100000000ULL
              : k;
      SpeckleConfig noise{cfg.looks, rng::stream_seed(cfg.seed,
                                                      rng::Stream::kTrainingPair,
                                                      stream_index)};
      pairs.push_back(
          make_training_pair(clean_patches[k], noise, cfg.unit_noise_hook));
    }
    return pairs;
  };
  std::vector<TrainingPair> pairs = build_pairs(0);

  // validation images speckled once, one stream per image
  std::vector<ImageF> val_clean;
  std::vector<ImageF> val_speckled;
  for (std::size_t i = 0; i < val_indices.size(); ++i) {
    const ImageF& clean = dataset[val_indices[i]];
    SpeckleConfig noise{cfg.looks,
                        rng::stream_seed(cfg.seed, rng::Stream::kValidationNoise,
                                         static_cast<std::uint64_t>(i))};
    val_clean.push_back(clean);
    val_speckled.push_back(cfg.unit_noise_hook ? clean
                                               : apply_speckle(clean, noise));
  }

  TrainResult result;
  if (warm_start) {
    validate_spec(warm_start->spec);
    result.net = *warm_start;
  } else {
    result.net = build_sardrn(spec, cfg.seed);
  }
  result.validation_image_indices = val_indices;
  AdamState state = AdamState::zeros_like(result.net);

  long iteration = 0;
  bool stop = false;
  for (int epoch = 0; epoch < cfg.epochs && !stop; ++epoch) {
    if (cfg.redraw_noise_each_epoch && epoch > 0) pairs = build_pairs(epoch);
    const double lr = lr_at_epoch(epoch, cfg);

    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto eng = rng::make_engine(cfg.seed, rng::Stream::kEpochShuffle,
                                static_cast<std::uint64_t>(epoch));
    rng::shuffle(order, eng);

    const std::size_t n_batches =
        pairs.size() / static_cast<std::size_t>(cfg.batch_size);
    for (std::size_t b = 0; b < n_batches && !stop; ++b) {
      const std::size_t first = b * static_cast<std::size_t>(cfg.batch_size);
      const Tensor4 x =
          detail::assemble_batch(pairs, order, first, cfg.batch_size, false);
      const Tensor4 target =
          detail::assemble_batch(pairs, order, first, cfg.batch_size, true);

      ForwardTrace trace;
      const Tensor4 pred = forward(result.net, x, &trace);
      auto [loss, grad_pred] = mse_residual_loss(pred, target);
      ++iteration;
      if (!std::isfinite(loss)) {
        throw NumericError("train: non-finite loss at iteration " +
                           std::to_string(iteration));
      }
      const NetworkGrads grads = backward(result.net, trace, grad_pred);
      adam_step(result.net, grads, state, lr, cfg);

      IterationRecord record{iteration, epoch, lr, loss};
      result.loss_history.push_back(record);
      if (on_iteration) on_iteration(record);
      if (cfg.max_iterations > 0 && iteration >= cfg.max_iterations) {
        stop = true;
      }
    }

    if (!val_clean.empty()) {
      double total = 0.0;
      for (std::size_t i = 0; i < val_clean.size(); ++i) {
        const ImageF restored = despeckle(result.net, val_speckled[i]);
        total += psnr(restored, val_clean[i]);
      }
      result.validation_history.push_back(
          {epoch, total / static_cast<double>(val_clean.size())});
    }
  }
  return result;
}

}  // namespace sardrn
