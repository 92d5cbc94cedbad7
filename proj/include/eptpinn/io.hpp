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

#include <json.hpp>

#include "eptpinn/dataset.hpp"
#include "eptpinn/trainer.hpp"

namespace eptpinn::io {

// Dataset container ("EPTD"): magic, u32 LE format version, u64 LE JSON
// header length, JSON header, then little-endian f64 arrays in x-fastest
// order (field Re, field Im, noisy Re, noisy Im, eps_r, sigma) followed by
// the interior and availability masks as one byte per voxel.
inline constexpr std::uint32_t kDatasetFormatVersion = 1;

void write_dataset(const std::string& path, const sim::SyntheticDataset& ds);
sim::SyntheticDataset read_dataset(const std::string& path);

// Model container ("EPTM"): magic, u32 LE format version, u64 LE JSON
// metadata length, JSON metadata, then the flattened parameter vectors as
// little-endian f64 (field network first, then the permittivity network).
// Checkpoints append the Adam moment vectors, flagged in the metadata.
inline constexpr std::uint32_t kModelFormatVersion = 1;

struct ModelFile {
  net::MlpParams field;
  net::MlpParams eps;
  std::uint64_t field_seed = 0;
  std::uint64_t eps_seed = 0;
  long iteration = 0;
  double field_scale = 1.0;
  sim::Grid train_grid;
  physics::PhysicsConstants constants;
  std::optional<train::AdamState> optimizer;
};

void write_model(const std::string& path, const ModelFile& model);
ModelFile read_model(const std::string& path);

// JSON views of the core configuration types, shared by the file headers,
// the CLI configs and the language bindings.
nlohmann::ordered_json grid_to_json(const sim::Grid& g);
sim::Grid grid_from_json(const nlohmann::json& j);
nlohmann::ordered_json phantom_to_json(const sim::PhantomSpec& spec);
sim::PhantomSpec phantom_from_json(const nlohmann::json& j);
nlohmann::ordered_json mask_to_json(const sim::MaskSpec& m);
sim::MaskSpec mask_from_json(const nlohmann::json& j);
nlohmann::ordered_json mlp_config_to_json(const net::MlpConfig& c);
net::MlpConfig mlp_config_from_json(const nlohmann::json& j);

/// Parses a `generate` configuration. The grid accepts either
/// {dims, spacing_m, origin_m} or {dims, extent_m, center_m}.
sim::GenerateConfig parse_generate_config(const nlohmann::json& j);

struct TrainJobConfig {
  net::MlpConfig field_config;
  net::MlpConfig eps_config;
  train::TrainConfig train;
};

TrainJobConfig parse_train_config(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);

}  // namespace eptpinn::io
