/* Copyright (c) 2026 The eptpinn Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#include "eptpinn/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

namespace eptpinn::pipeline {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void generate_to_file(const std::string& config_json,
                      const std::string& out_path,
                      std::optional<std::uint64_t> seed_override) {
  auto cfg = io::parse_generate_config(nlohmann::json::parse(config_json));
  if (seed_override) cfg.seed = *seed_override;
  const auto dataset = sim::generate_dataset(cfg);
  io::write_dataset(out_path, dataset);
}

TrainSummary train_to_file(const std::string& data_path,
                           const std::string& config_json,
                           const std::string& out_path,
                           const std::string& log_path,
                           const std::string& checkpoint_prefix) {
  const auto dataset = io::read_dataset(data_path);
  const auto job = io::parse_train_config(nlohmann::json::parse(config_json));

  std::ofstream log;
  if (!log_path.empty()) {
    log.open(log_path, std::ios::trunc);
    if (!log) throw std::runtime_error("cannot open log file " + log_path);
    log << "iteration,loss_total,loss_data,loss_residual,lr\n";
  }

  auto snapshot_to_model = [&](const train::TrainState& state) {
    io::ModelFile model;
    model.field = state.field_params();
    model.eps = state.eps_params();
    model.field_seed = job.train.field_seed;
    model.eps_seed = job.train.eps_seed;
    model.iteration = state.iteration;
    model.field_scale = state.field_scale;
    model.train_grid = dataset.grid;
    model.constants = dataset.constants;
    return model;
  };

  train::TrainCallbacks callbacks;
  callbacks.on_log = [&](const train::LossRecord& rec) {
    if (log.is_open()) {
      log << rec.iteration << ',' << format_double(rec.total) << ','
          << format_double(rec.data) << ',' << format_double(rec.residual)
          << ',' << format_double(rec.lr) << '\n';
    }
  };
  if (!checkpoint_prefix.empty()) {
    callbacks.on_checkpoint = [&](const train::TrainState& state) {
      auto model = snapshot_to_model(state);
      model.optimizer = state.adam;
      io::write_model(checkpoint_prefix + "-" +
                          std::to_string(state.iteration) + ".eptm",
                      model);
    };
  }

  const auto result = train::train(dataset, job.field_config, job.eps_config,
                                   job.train, callbacks);
  io::write_model(out_path, snapshot_to_model(result.state));

  TrainSummary summary;
  summary.iterations = result.state.iteration;
  if (!result.history.empty()) {
    summary.final_total = result.history.back().total;
    summary.final_data = result.history.back().data;
    summary.final_residual = result.history.back().residual;
  }
  return summary;
}

nlohmann::ordered_json evaluate_report(const std::string& data_path,
                                       const std::string& model_path,
                                       std::optional<Eigen::Vector3i> grid_dims,
                                       bool timestamp) {
  const auto dataset = io::read_dataset(data_path);
  const auto model = io::read_model(model_path);

  sim::Grid grid = dataset.grid;
  bool native_grid = true;
  if (grid_dims) {
    sim::Grid g;
    g.dims = *grid_dims;
    const Eigen::Vector3d extent = dataset.grid.extent();
    for (int d = 0; d < 3; ++d) g.spacing[d] = extent[d] / (g.dims[d] - 1);
    g.origin = dataset.grid.origin;
    g.validate();
    native_grid = g.dims == dataset.grid.dims;
    grid = g;
  }

  const auto map = model.train_grid.coordinate_map();
  const auto maps = eval::sample_networks(model.field, model.eps,
                                          model.field_scale, grid, map,
                                          model.constants);

  std::vector<std::uint8_t> mask;
  std::vector<double> eps_truth, sigma_truth;
  std::optional<double> pnae_b1;
  if (native_grid) {
    mask = dataset.interior_mask;
    eps_truth = dataset.eps_r_truth;
    sigma_truth = dataset.sigma_truth;
    pnae_b1 = eval::pnae(maps.b1, dataset.field, mask);
  } else {
    // The true field is only known at the native resolution; property
    // truths can be re-rasterized at any resolution.
    const auto raster =
        sim::rasterize_phantom(dataset.phantom, grid, dataset.constants);
    mask = raster.interior;
    eps_truth = raster.eps_r;
    sigma_truth = raster.sigma;
  }
  const double pnae_eps = eval::pnae(maps.eps_r, eps_truth, mask);
  const double pnae_sigma = eval::pnae(maps.sigma, sigma_truth, mask);

  long voxels = 0;
  for (auto m : mask) voxels += m;

  nlohmann::ordered_json report;
  report["format_version"] = 1;
  report["grid"] = io::grid_to_json(grid);
  report["region"] = "interior";
  report["voxel_count"] = voxels;
  if (pnae_b1) {
    report["pnae_b1_percent"] = *pnae_b1;
  } else {
    report["pnae_b1_percent"] = nullptr;
  }
  report["pnae_eps_percent"] = pnae_eps;
  report["pnae_sigma_percent"] = pnae_sigma;
  if (timestamp) {
    const auto now = std::chrono::system_clock::now();
    report["generated_at"] =
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch())
            .count();
  }
  return report;
}

void export_slice_file(const std::string& model_path,
                       const std::string& map_name,
                       const std::string& component_name, int axis, int index,
                       const std::string& out_path) {
  const auto model = io::read_model(model_path);
  const auto grid = model.train_grid;
  const auto maps = eval::sample_networks(model.field, model.eps,
                                          model.field_scale, grid,
                                          grid.coordinate_map(),
                                          model.constants);

  if (axis < 0 || axis > 2) {
    throw std::invalid_argument("export: axis must be 0, 1 or 2");
  }

  if (map_name == "b1") {
    eval::SliceComponent component = eval::SliceComponent::kMagnitude;
    if (component_name == "re") component = eval::SliceComponent::kReal;
    else if (component_name == "im") component = eval::SliceComponent::kImag;
    else if (component_name == "phase") component = eval::SliceComponent::kPhase;
    else if (component_name != "mag" && !component_name.empty()) {
      throw std::invalid_argument("export: component must be mag, re, im or phase");
    }
    eval::export_slice(maps.b1, grid, axis, index, component, out_path);
  } else if (map_name == "eps") {
    eval::export_slice(maps.eps_r, grid, axis, index, out_path);
  } else if (map_name == "sigma") {
    eval::export_slice(maps.sigma, grid, axis, index, out_path);
  } else {
    throw std::invalid_argument("export: map must be b1, eps or sigma");
  }
}

}  // namespace eptpinn::pipeline
