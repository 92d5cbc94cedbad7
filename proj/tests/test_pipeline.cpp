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

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "eptpinn/pipeline.hpp"

using namespace eptpinn;
namespace fs = std::filesystem;

namespace {

constexpr const char* kGenerateConfig = R"json({
  "grid": {"dims": [13, 13, 13], "extent_m": [0.14, 0.14, 0.14]},
  "constants": {"frequency_hz": 297.2e6},
  "noise": {"peak_snr": 100.0, "seed": 9}
})json";

constexpr const char* kTrainConfig = R"json({
  "field_net": {"hidden_layers": 1, "hidden_width": 8, "omega0": 10.0, "seed": 1},
  "eps_net": {"hidden_layers": 1, "hidden_width": 8, "omega0": 10.0, "seed": 2},
  "train": {"total_iterations": %ITERS%, "lr_schedule": [[0, 1e-3]],
            "lambda": 1e-6, "log_every": 50, "checkpoint_every": 0}
})json";

std::string train_config(long iters) {
  std::string cfg = kTrainConfig;
  const auto pos = cfg.find("%ITERS%");
  return cfg.replace(pos, 7, std::to_string(iters));
}

}  // namespace

TEST_CASE("pipeline smoke: zero-iteration model still evaluates finitely") {
  const fs::path dir = fs::temp_directory_path() / "eptpinn_pipeline_test";
  fs::create_directories(dir);
  const std::string data = (dir / "d.eptd").string();
  const std::string model = (dir / "m.eptm").string();

  pipeline::generate_to_file(kGenerateConfig, data);
  const auto summary = pipeline::train_to_file(data, train_config(0), model);
  CHECK(summary.iterations == 0);

  const auto report = pipeline::evaluate_report(data, model, std::nullopt);
  CHECK(report.at("voxel_count").get<long>() > 0);
  const double b1 = report.at("pnae_b1_percent").get<double>();
  const double eps = report.at("pnae_eps_percent").get<double>();
  const double sigma = report.at("pnae_sigma_percent").get<double>();
  CHECK(std::isfinite(b1));
  CHECK(std::isfinite(eps));
  CHECK(std::isfinite(sigma));
  // An untrained model is far from the truth.
  CHECK(eps > 10.0);

  fs::remove_all(dir);
}

TEST_CASE("evaluate reports are byte-identical for identical inputs") {
  const fs::path dir = fs::temp_directory_path() / "eptpinn_pipeline_rep";
  fs::create_directories(dir);
  const std::string data = (dir / "d.eptd").string();
  const std::string model = (dir / "m.eptm").string();

  pipeline::generate_to_file(kGenerateConfig, data);
  pipeline::train_to_file(data, train_config(40), model);

  const auto a = pipeline::evaluate_report(data, model, std::nullopt).dump(2);
  const auto b = pipeline::evaluate_report(data, model, std::nullopt).dump(2);
  CHECK(a == b);

  // The refined-grid report succeeds and marks the field metric null.
  const auto refined =
      pipeline::evaluate_report(data, model, Eigen::Vector3i(25, 25, 25));
  CHECK(refined.at("pnae_b1_percent").is_null());
  CHECK(std::isfinite(refined.at("pnae_eps_percent").get<double>()));

  fs::remove_all(dir);
}

TEST_CASE("slice export through the pipeline") {
  const fs::path dir = fs::temp_directory_path() / "eptpinn_pipeline_slice";
  fs::create_directories(dir);
  const std::string data = (dir / "d.eptd").string();
  const std::string model = (dir / "m.eptm").string();
  const std::string slice = (dir / "s.csv").string();

  pipeline::generate_to_file(kGenerateConfig, data);
  pipeline::train_to_file(data, train_config(10), model);
  pipeline::export_slice_file(model, "sigma", "", 2, 6, slice);

  std::ifstream in(slice);
  REQUIRE(in.good());
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 13);

  CHECK_THROWS(pipeline::export_slice_file(model, "nope", "", 2, 6, slice));
  CHECK_THROWS(pipeline::export_slice_file(model, "b1", "bogus", 2, 6, slice));

  fs::remove_all(dir);
}
