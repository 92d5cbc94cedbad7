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

#pragma once

#include <optional>
#include <string>

#include "eptpinn/io.hpp"
#include "eptpinn/metrics.hpp"

namespace eptpinn::pipeline {

// End-to-end entry points shared by the command line tool and the Python
// bindings. Configs are JSON strings in the formats of io::parse_*_config.

/// Phantom -> forward solve -> noise -> mask -> dataset file.
void generate_to_file(const std::string& config_json,
                      const std::string& out_path,
                      std::optional<std::uint64_t> seed_override = {});

struct TrainSummary {
  long iterations = 0;
  double final_total = 0.0;
  double final_data = 0.0;
  double final_residual = 0.0;
};

/// Trains on a dataset file and writes the final model; optionally writes a
/// CSV loss log (iteration,loss_total,loss_data,loss_residual,lr) and
/// intermediate checkpoints (with optimizer state) under a path prefix.
TrainSummary train_to_file(const std::string& data_path,
                           const std::string& config_json,
                           const std::string& out_path,
                           const std::string& log_path = {},
                           const std::string& checkpoint_prefix = {});

/// PNAE report of a model against a dataset, on the native grid or on an
/// alternate resolution over the same physical box. Field PNAE is only
/// defined on the native grid (the true field is a gridded quantity);
/// property truths are re-rasterized as needed.
nlohmann::ordered_json evaluate_report(const std::string& data_path,
                                       const std::string& model_path,
                                       std::optional<Eigen::Vector3i> grid_dims,
                                       bool timestamp = false);

/// Samples a trained model on its training grid and writes one CSV slice.
void export_slice_file(const std::string& model_path,
                       const std::string& map_name,
                       const std::string& component_name, int axis, int index,
                       const std::string& out_path);

}  // namespace eptpinn::pipeline
