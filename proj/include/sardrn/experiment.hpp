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

// Experiment configuration: flat `key = value` text, '#' comments. Collects
// the training hyperparameters plus dataset/output paths and network
// overrides (dilation list, skip list, channel width, and the
// dilations/skips on-off switches used for ablation runs).

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sardrn/errors.hpp"
#include "sardrn/network.hpp"
#include "sardrn/training.hpp"

namespace sardrn {

struct ExperimentConfig {
  TrainConfig train;
  std::string dataset_dir;
  std::string output_dir;
  int channels = 64;
  std::vector<int> dilations = {1, 2, 3, 4, 3, 2, 1};
  std::vector<std::pair<int, int>> skips = NetworkSpec::default_skips();
  bool use_dilations = true;
  bool use_skips = true;

  NetworkSpec make_network_spec() const {
    if (channels < 1) throw ConfigError("config: channels must be >= 1");
    NetworkSpec spec = NetworkSpec::sardrn(channels);
    if (dilations.size() != spec.layers.size()) {
      throw ConfigError("config: dilation list length " +
                        std::to_string(dilations.size()) +
                        " != layer count " +
                        std::to_string(spec.layers.size()));
    }
    for (std::size_t l = 0; l < spec.layers.size(); ++l) {
      const int d = use_dilations ? dilations[l] : 1;
      spec.layers[l].dilation = d;
      spec.layers[l].pad = d;
    }
    spec.skips = use_skips ? skips : std::vector<std::pair<int, int>>{};
    return spec;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config: bad boolean for " + key + ": '" + value + "'");
}

inline double parse_double(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad number for " + key + ": '" + value + "'");
  }
}

inline long parse_long(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const long v = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer for " + key + ": '" + value + "'");
  }
}

inline std::vector<int> parse_int_list(const std::string& value,
                                       const std::string& key) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(static_cast<int>(parse_long(trim(item), key)));
  }
  if (out.empty()) throw ConfigError("config: empty list for " + key);
  return out;
}

// "1:3,4:7" or "none"
inline std::vector<std::pair<int, int>> parse_skip_list(
    const std::string& value, const std::string& key) {
  if (value == "none") return {};
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string pair = trim(item);
    const std::size_t colon = pair.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("config: bad skip pair for " + key + ": '" + pair +
                        "' (expected source:dest)");
    }
    out.emplace_back(
        static_cast<int>(parse_long(trim(pair.substr(0, colon)), key)),
        static_cast<int>(parse_long(trim(pair.substr(colon + 1)), key)));
  }
  return out;
}

}  // namespace detail

inline ExperimentConfig parse_experiment_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int line_no = 0;
  bool have_dataset = false;
  bool have_output = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));

    if (key == "dataset_dir") {
      cfg.dataset_dir = value;
      have_dataset = true;
    } else if (key == "output_dir") {
      cfg.output_dir = value;
      have_output = true;
    } else if (key == "looks") {
      cfg.train.looks = detail::parse_double(value, key);
    } else if (key == "patch_size") {
      cfg.train.patch_size = static_cast<int>(detail::parse_long(value, key));
    } else if (key == "stride") {
      cfg.train.stride = static_cast<int>(detail::parse_long(value, key));
    } else if (key == "batch_size") {
      cfg.train.batch_size = static_cast<int>(detail::parse_long(value, key));
    } else if (key == "epochs") {
      cfg.train.epochs = static_cast<int>(detail::parse_long(value, key));
    } else if (key == "max_iterations") {
      cfg.train.max_iterations = detail::parse_long(value, key);
    } else if (key == "lr0") {
      cfg.train.lr0 = detail::parse_double(value, key);
    } else if (key == "beta1") {
      cfg.train.beta1 = detail::parse_double(value, key);
    } else if (key == "beta2") {
      cfg.train.beta2 = detail::parse_double(value, key);
    } else if (key == "epsilon") {
      cfg.train.epsilon = detail::parse_double(value, key);
    } else if (key == "lr_decay") {
      cfg.train.lr_decay = detail::parse_double(value, key);
    } else if (key == "decay_interval_epochs") {
      cfg.train.decay_interval_epochs =
          static_cast<int>(detail::parse_long(value, key));
    } else if (key == "seed") {
      cfg.train.seed =
          static_cast<std::uint64_t>(detail::parse_long(value, key));
    } else if (key == "adam_bias_correction") {
      cfg.train.adam_bias_correction = detail::parse_bool(value, key);
    } else if (key == "redraw_noise_each_epoch") {
      cfg.train.redraw_noise_each_epoch = detail::parse_bool(value, key);
    } else if (key == "channels") {
      cfg.channels = static_cast<int>(detail::parse_long(value, key));
    } else if (key == "dilations") {
      cfg.dilations = detail::parse_int_list(value, key);
    } else if (key == "skips") {
      cfg.skips = detail::parse_skip_list(value, key);
    } else if (key == "use_dilations") {
      cfg.use_dilations = detail::parse_bool(value, key);
    } else if (key == "use_skips") {
      cfg.use_skips = detail::parse_bool(value, key);
    } else {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": unknown key '" + key + "'");
    }
  }
  if (!have_dataset) throw ConfigError("config: missing dataset_dir");
  if (!have_output) throw ConfigError("config: missing output_dir");
  return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  ExperimentConfig cfg = parse_experiment_config(in);
  if (!std::filesystem::is_directory(cfg.dataset_dir)) {
    throw ConfigError("config: dataset_dir does not exist: " +
                      cfg.dataset_dir);
  }
  return cfg;
}

// Sorted so dataset ordering (and with it every seeded stream) is stable.
inline std::vector<std::string> list_pgm_files(const std::string& dir) {
  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace sardrn
