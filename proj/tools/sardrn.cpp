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

// Command-line front end. Subcommands:
//   simulate   apply multiplicative speckle to a clean image
//   train      patch-based residual training from a config file
//   despeckle  run inference: x_hat = y - predicted residual
//   evaluate   PSNR / SSIM / EPD-ROA / ENL report
//   gradcheck  finite-difference verification of the conv backward pass
//   rf         receptive-field report
//   plot       render a CSV column pair as an SVG line chart
//   toygen     write procedural test scenes as PGM files
//
// Exit codes: 0 success, 1 failed check, 2 usage or input error,
// 3 numeric failure during training.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sardrn/sardrn.hpp"

namespace fs = std::filesystem;

namespace {

std::vector<int> parse_csv_ints(const std::string& text, const char* what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw sardrn::ArgumentError(std::string(what) + ": bad integer '" +
                                  item + "'");
    }
  }
  if (out.empty()) {
    throw sardrn::ArgumentError(std::string(what) + ": empty list");
  }
  return out;
}

struct Region {
  int x = 0, y = 0, w = 0, h = 0;
};

Region parse_region(const std::string& text) {
  const auto v = parse_csv_ints(text, "--region");
  if (v.size() != 4) {
    throw sardrn::ArgumentError("--region expects x,y,w,h");
  }
  return {v[0], v[1], v[2], v[3]};
}

int cmd_simulate(const std::string& in, double looks, std::uint64_t seed,
                 const std::string& out, const std::string& region) {
  const sardrn::ImageF clean = sardrn::load_image(in);
  const sardrn::SpeckleConfig cfg{looks, seed};
  const sardrn::ImageF speckled = sardrn::apply_speckle(clean, cfg);
  sardrn::save_image(speckled, out);
  if (!region.empty()) {
    const Region r = parse_region(region);
    // computed on the raw field, before export quantization
    const sardrn::ImageF patch = sardrn::crop(speckled, r.x, r.y, r.w, r.h);
    const double value =
        sardrn::enl(patch, sardrn::EnlDefinition::kMeanSquaredOverVar);
    std::printf("ENL(standard) region %d,%d,%d,%d: %.6f\n", r.x, r.y, r.w,
                r.h, value);
  }
  return 0;
}

int cmd_train(const std::string& config_path) {
  const sardrn::ExperimentConfig cfg =
      sardrn::load_experiment_config(config_path);
  fs::create_directories(cfg.output_dir);

  const auto files = sardrn::list_pgm_files(cfg.dataset_dir);
  if (files.empty()) {
    throw sardrn::ConfigError("no .pgm files in dataset_dir: " +
                              cfg.dataset_dir);
  }
  std::vector<sardrn::ImageF> dataset;
  dataset.reserve(files.size());
  for (const auto& f : files) dataset.push_back(sardrn::load_image(f));

  const sardrn::NetworkSpec spec = cfg.make_network_spec();

  const std::string loss_path = cfg.output_dir + "/loss.csv";
  std::ofstream loss_csv(loss_path);
  if (!loss_csv) throw sardrn::IoError("cannot write " + loss_path);
  loss_csv << "iteration,epoch,lr,loss\n";

  const auto on_iteration = [&](const sardrn::IterationRecord& r) {
    loss_csv << r.iteration << ',' << r.epoch << ',' << r.lr << ','
             << r.loss << '\n';
    std::printf("iter=%ld epoch=%d lr=%.6g loss=%.8f\n", r.iteration, r.epoch,
                r.lr, r.loss);
  };

  const sardrn::TrainResult result =
      sardrn::train(dataset, cfg.train, spec, on_iteration);
  loss_csv.flush();

  const std::string val_path = cfg.output_dir + "/validation.csv";
  std::ofstream val_csv(val_path);
  if (!val_csv) throw sardrn::IoError("cannot write " + val_path);
  val_csv << "epoch,psnr_db\n";
  for (const auto& v : result.validation_history) {
    val_csv << v.epoch << ',' << v.psnr_db << '\n';
  }

  const std::string model_path = cfg.output_dir + "/model.sdrn";
  sardrn::save_model(result.net, model_path);
  std::printf("trained %zu iterations, model written to %s\n",
              result.loss_history.size(), model_path.c_str());
  return 0;
}

int cmd_despeckle(const std::string& model, const std::string& in,
                  const std::string& out, const std::string& skips) {
  const auto skip_list = sardrn::detail::parse_skip_list(skips, "--skips");
  const sardrn::Network net = sardrn::load_model(model, skip_list);
  const sardrn::ImageF y = sardrn::load_image(in);
  const sardrn::ImageF restored = sardrn::despeckle(net, y);
  sardrn::save_image(restored, out);
  return 0;
}

int cmd_evaluate(const std::string& ref_path, const std::string& test_path,
                 const std::vector<std::string>& regions,
                 const std::string& csv_path, double peak,
                 const std::string& enl_def) {
  const sardrn::ImageF ref = sardrn::load_image(ref_path);
  const sardrn::ImageF test = sardrn::load_image(test_path);

  sardrn::MetricReport report;
  report.psnr_db = sardrn::psnr(test, ref, peak);
  report.ssim = sardrn::ssim(test, ref, peak);
  report.epd_roa_h =
      sardrn::epd_roa(test, ref, sardrn::EpdDirection::kHorizontal);
  report.epd_roa_v =
      sardrn::epd_roa(test, ref, sardrn::EpdDirection::kVertical);
  const auto definition = enl_def == "mean-var"
                              ? sardrn::EnlDefinition::kMeanOverVar
                              : sardrn::EnlDefinition::kMeanSquaredOverVar;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const Region r = parse_region(regions[i]);
    const sardrn::ImageF patch = sardrn::crop(test, r.x, r.y, r.w, r.h);
    std::ostringstream label;
    label << "region" << (i + 1) << '@' << r.x << ':' << r.y << ':' << r.w
          << ':' << r.h;
    report.enl.emplace_back(label.str(), sardrn::enl(patch, definition));
  }

  std::cout << report.table();
  if (!csv_path.empty()) {
    const bool fresh = !fs::exists(csv_path);
    std::ofstream csv(csv_path, std::ios::app);
    if (!csv) throw sardrn::IoError("cannot write " + csv_path);
    if (fresh) csv << sardrn::MetricReport::csv_header() << '\n';
    csv << report.csv_row(ref_path, test_path) << '\n';
  }
  return 0;
}

int cmd_gradcheck(std::uint64_t seed) {
  const sardrn::GradcheckResult result = sardrn::run_conv_gradcheck(seed);
  std::printf("gradcheck: %d instances, worst relative error %.3e at %s\n",
              result.instances, result.worst_error,
              result.worst_site.c_str());
  if (!result.passes(1e-5)) {
    std::printf("gradcheck: FAIL (tolerance 1e-5)\n");
    return 1;
  }
  std::printf("gradcheck: PASS (tolerance 1e-5)\n");
  return 0;
}

int cmd_rf(const std::string& dilations, int depth) {
  sardrn::ReceptiveFieldReport report;
  if (!dilations.empty()) {
    report = sardrn::receptive_field(parse_csv_ints(dilations, "--dilations"));
  } else if (depth > 0) {
    report = sardrn::receptive_field(depth);
  } else {
    throw sardrn::ArgumentError("rf: provide --dilations or --depth");
  }
  std::printf("depth               %d\n", report.depth);
  std::printf("common_rf           %d\n", report.common_rf);
  std::printf("dilated_doubling_rf %d\n", report.dilated_doubling_rf);
  std::printf("config_rf           %d\n", report.config_rf);
  return 0;
}

int cmd_toygen(const std::string& out_dir, int count, int size,
               std::uint64_t seed) {
  fs::create_directories(out_dir);
  for (int i = 0; i < count; ++i) {
    const sardrn::ImageF img =
        sardrn::make_toy_image(seed, static_cast<std::uint64_t>(i), size);
    char name[32];
    std::snprintf(name, sizeof(name), "toy_%03d.pgm", i);
    sardrn::save_image(img, out_dir + "/" + name);
  }
  std::printf("wrote %d images to %s\n", count, out_dir.c_str());
  return 0;
}

// Minimal dependency-free SVG line chart.
int cmd_plot(const std::string& csv_path, const std::string& out_path,
             const std::string& x_col, const std::string& y_col) {
  std::ifstream in(csv_path);
  if (!in) throw sardrn::IoError("cannot open csv: " + csv_path);
  std::string line;
  if (!std::getline(in, line)) {
    throw sardrn::ParseError("plot: empty csv", 0);
  }
  std::vector<std::string> headers;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) headers.push_back(cell);
  }
  long xi = -1;
  long yi = -1;
  for (std::size_t i = 0; i < headers.size(); ++i) {
    if (headers[i] == x_col) xi = static_cast<long>(i);
    if (headers[i] == y_col) yi = static_cast<long>(i);
  }
  if (xi < 0 || yi < 0) {
    throw sardrn::ArgumentError("plot: csv lacks column '" +
                                (xi < 0 ? x_col : y_col) + "'");
  }
  std::vector<double> xs, ys;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (static_cast<long>(cells.size()) <= std::max(xi, yi)) continue;
    xs.push_back(std::stod(cells[static_cast<std::size_t>(xi)]));
    ys.push_back(std::stod(cells[static_cast<std::size_t>(yi)]));
  }
  if (xs.size() < 2) throw sardrn::ArgumentError("plot: need >= 2 rows");

  double xmin = xs[0], xmax = xs[0], ymin = ys[0], ymax = ys[0];
  for (std::size_t i = 1; i < xs.size(); ++i) {
    xmin = std::min(xmin, xs[i]);
    xmax = std::max(xmax, xs[i]);
    ymin = std::min(ymin, ys[i]);
    ymax = std::max(ymax, ys[i]);
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;

  const double w = 640.0, h = 400.0, ml = 70.0, mr = 20.0, mt = 20.0,
               mb = 50.0;
  auto mapx = [&](double v) {
    return ml + (v - xmin) / (xmax - xmin) * (w - ml - mr);
  };
  auto mapy = [&](double v) {
    return h - mb - (v - ymin) / (ymax - ymin) * (h - mt - mb);
  };

  std::ofstream svg(out_path);
  if (!svg) throw sardrn::IoError("cannot write " + out_path);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h
      << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr
      << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
  svg << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" "
         "points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    svg << mapx(xs[i]) << ',' << mapy(ys[i]) << ' ';
  }
  svg << "\"/>\n";
  svg << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 12
      << "\" text-anchor=\"middle\" font-size=\"14\">" << x_col
      << "</text>\n";
  svg << "<text x=\"18\" y=\"" << (mt + h - mb) / 2
      << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 "
         "18 "
      << (mt + h - mb) / 2 << ")\">" << y_col << "</text>\n";
  svg << "<text x=\"" << ml << "\" y=\"" << h - mb + 16
      << "\" font-size=\"11\">" << xmin << "</text>\n";
  svg << "<text x=\"" << w - mr << "\" y=\"" << h - mb + 16
      << "\" text-anchor=\"end\" font-size=\"11\">" << xmax << "</text>\n";
  svg << "<text x=\"" << ml - 4 << "\" y=\"" << h - mb
      << "\" text-anchor=\"end\" font-size=\"11\">" << ymin << "</text>\n";
  svg << "<text x=\"" << ml - 4 << "\" y=\"" << mt + 10
      << "\" text-anchor=\"end\" font-size=\"11\">" << ymax << "</text>\n";
  svg << "</svg>\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SAR image despeckling with a dilated residual network"};
  app.require_subcommand(1);
  int rc = 0;

  // simulate
  auto* simulate = app.add_subcommand("simulate", "add multiplicative speckle");
  std::string sim_in, sim_out, sim_region;
  double sim_looks = 1.0;
  std::uint64_t sim_seed = 0;
  simulate->add_option("--in", sim_in, "clean input PGM")->required();
  simulate->add_option("--out", sim_out, "speckled output PGM")->required();
  simulate->add_option("--looks", sim_looks, "number of looks L (>= 1)");
  simulate->add_option("--seed", sim_seed, "rng seed");
  simulate->add_option("--region", sim_region,
                       "x,y,w,h region to report standard ENL for");
  simulate->callback(
      [&] { rc = cmd_simulate(sim_in, sim_looks, sim_seed, sim_out, sim_region); });

  // train
  auto* train = app.add_subcommand("train", "train a despeckling model");
  std::string train_config;
  train->add_option("--config", train_config, "key = value config file")
      ->required();
  train->callback([&] { rc = cmd_train(train_config); });

  // despeckle
  auto* despeckle = app.add_subcommand("despeckle", "run inference");
  std::string dsp_model, dsp_in, dsp_out, dsp_skips = "1:3,4:7";
  despeckle->add_option("--model", dsp_model, "model file")->required();
  despeckle->add_option("--in", dsp_in, "speckled input PGM")->required();
  despeckle->add_option("--out", dsp_out, "despeckled output PGM")->required();
  despeckle->add_option("--skips", dsp_skips,
                        "skip topology, e.g. 1:3,4:7 or none");
  despeckle->callback(
      [&] { rc = cmd_despeckle(dsp_model, dsp_in, dsp_out, dsp_skips); });

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "quality metrics report");
  std::string eval_ref, eval_test, eval_csv, eval_enl_def = "standard";
  std::vector<std::string> eval_regions;
  double eval_peak = 1.0;
  evaluate->add_option("--ref", eval_ref, "reference PGM")->required();
  evaluate->add_option("--test", eval_test, "image under test")->required();
  evaluate->add_option("--region", eval_regions,
                       "x,y,w,h region for ENL (repeatable)");
  evaluate->add_option("--csv", eval_csv, "append a CSV row to this file");
  evaluate->add_option("--peak", eval_peak, "peak value for PSNR/SSIM");
  evaluate->add_option("--enl-def", eval_enl_def, "standard | mean-var")
      ->check(CLI::IsMember({"standard", "mean-var"}));
  evaluate->callback([&] {
    rc = cmd_evaluate(eval_ref, eval_test, eval_regions, eval_csv, eval_peak,
                      eval_enl_def);
  });

  // gradcheck
  auto* gradcheck =
      app.add_subcommand("gradcheck", "finite-difference gradient check");
  std::uint64_t gc_seed = 12345;
  gradcheck->add_option("--seed", gc_seed, "rng seed");
  gradcheck->callback([&] { rc = cmd_gradcheck(gc_seed); });

  // rf
  auto* rf = app.add_subcommand("rf", "receptive-field report");
  std::string rf_dilations;
  int rf_depth = 0;
  rf->add_option("--dilations", rf_dilations, "comma list, e.g. 1,2,3,4,3,2,1");
  rf->add_option("--depth", rf_depth, "layer depth for the closed forms");
  rf->callback([&] { rc = cmd_rf(rf_dilations, rf_depth); });

  // plot
  auto* plot = app.add_subcommand("plot", "render a CSV column as SVG");
  std::string plot_csv, plot_out, plot_x = "iteration", plot_y = "loss";
  plot->add_option("--csv", plot_csv, "input csv")->required();
  plot->add_option("--out", plot_out, "output svg")->required();
  plot->add_option("--x", plot_x, "x column name");
  plot->add_option("--y", plot_y, "y column name");
  plot->callback([&] { rc = cmd_plot(plot_csv, plot_out, plot_x, plot_y); });

  // toygen
  auto* toygen =
      app.add_subcommand("toygen", "write procedural test scenes as PGM");
  std::string toy_out;
  int toy_count = 16, toy_size = 64;
  std::uint64_t toy_seed = 0;
  toygen->add_option("--out", toy_out, "output directory")->required();
  toygen->add_option("--count", toy_count, "number of images");
  toygen->add_option("--size", toy_size, "image side length");
  toygen->add_option("--seed", toy_seed, "rng seed");
  toygen->callback(
      [&] { rc = cmd_toygen(toy_out, toy_count, toy_size, toy_seed); });

  try {
    app.parse(argc, argv);
    return rc;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const sardrn::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
