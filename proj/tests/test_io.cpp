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

#include "eptpinn/io.hpp"

using namespace eptpinn;

TEST_CASE("model files roundtrip bitwise, with and without optimizer state") {
  net::MlpConfig fcfg;
  fcfg.hidden_layers = 2;
  fcfg.hidden_width = 6;
  net::MlpConfig ecfg;
  ecfg.hidden_layers = 1;
  ecfg.hidden_width = 4;
  ecfg.omega0 = 12.5;

  io::ModelFile model;
  model.field = net::init_sine_mlp(fcfg, 101);
  model.eps = net::init_sine_mlp(ecfg, 202);
  model.field_seed = 101;
  model.eps_seed = 202;
  model.iteration = 777;
  model.field_scale = 3.25;
  model.train_grid = sim::Grid::centered_cube(9, 0.14);
  model.constants.frequency_hz = 297.2e6;

  const auto path = std::filesystem::temp_directory_path() / "model.eptm";

  for (const bool with_optimizer : {false, true}) {
    if (with_optimizer) {
      train::AdamState state;
      const auto n = static_cast<Eigen::Index>(fcfg.parameter_count() +
                                               ecfg.parameter_count());
      state.m = Eigen::VectorXd::LinSpaced(n, -1.0, 1.0);
      state.v = Eigen::VectorXd::LinSpaced(n, 0.0, 2.0);
      state.t = 777;
      model.optimizer = state;
    }
    io::write_model(path.string(), model);
    const auto back = io::read_model(path.string());

    CHECK(back.field.flatten() == model.field.flatten());
    CHECK(back.eps.flatten() == model.eps.flatten());
    CHECK(back.field.config.hidden_width == fcfg.hidden_width);
    CHECK(back.eps.config.omega0 == ecfg.omega0);
    CHECK(back.field_seed == model.field_seed);
    CHECK(back.eps_seed == model.eps_seed);
    CHECK(back.iteration == model.iteration);
    CHECK(back.field_scale == model.field_scale);
    CHECK(back.train_grid.dims == model.train_grid.dims);
    CHECK(back.constants.frequency_hz == model.constants.frequency_hz);
    CHECK(back.optimizer.has_value() == with_optimizer);
    if (with_optimizer) {
      CHECK(back.optimizer->m == model.optimizer->m);
      CHECK(back.optimizer->v == model.optimizer->v);
      CHECK(back.optimizer->t == model.optimizer->t);
    }
  }
  std::filesystem::remove(path);
}

TEST_CASE("model reader rejects foreign files") {
  const auto path = std::filesystem::temp_directory_path() / "bogus.eptm";
  {
    std::ofstream out(path);
    out << "EPTDnot a model";
  }
  CHECK_THROWS_AS(io::read_model(path.string()), std::runtime_error);
  std::filesystem::remove(path);
}

TEST_CASE("generate config parses the extent/center grid form") {
  const auto j = nlohmann::json::parse(R"json({
    "grid": {"dims": [17, 17, 17], "extent_m": [0.14, 0.14, 0.14]},
    "constants": {"frequency_hz": 297.2e6},
    "excitation": {"direction": [0, 0, 1]},
    "noise": {"peak_snr": 100.0, "seed": 42},
    "mask": {"kind": "half", "axis": "x", "side": "upper"}
  })json");
  const auto cfg = io::parse_generate_config(j);
  CHECK(cfg.grid.dims == Eigen::Vector3i(17, 17, 17));
  CHECK(cfg.grid.spacing[0] == doctest::Approx(0.14 / 16).epsilon(1e-15));
  CHECK(cfg.grid.origin == Eigen::Vector3d(-0.07, -0.07, -0.07));
  CHECK(cfg.constants.frequency_hz == 297.2e6);
  CHECK(cfg.incidence == Eigen::Vector3d(0, 0, 1));
  REQUIRE(cfg.peak_snr.has_value());
  CHECK(*cfg.peak_snr == 100.0);
  CHECK(cfg.seed == 42);
  CHECK(cfg.mask.kind == sim::MaskKind::kHalf);
  CHECK(cfg.mask.axis == 0);
  CHECK(cfg.mask.upper);
  // Default phantom filled in.
  CHECK(cfg.phantom.compartments.size() == 3);
}

TEST_CASE("generate config defaults to no noise and a full mask") {
  const auto j = nlohmann::json::parse(R"json({
    "grid": {"dims": [9, 9, 9], "extent_m": [0.14, 0.14, 0.14]}
  })json");
  const auto cfg = io::parse_generate_config(j);
  CHECK_FALSE(cfg.peak_snr.has_value());
  CHECK(cfg.mask.kind == sim::MaskKind::kFull);
  CHECK(cfg.incidence == Eigen::Vector3d(1, 0, 0));
}

TEST_CASE("train config parses nets, seeds and schedule") {
  const auto j = nlohmann::json::parse(R"json({
    "field_net": {"hidden_layers": 2, "hidden_width": 48, "omega0": 25.0, "seed": 7},
    "eps_net": {"hidden_layers": 1, "hidden_width": 32, "seed": 8},
    "train": {
      "total_iterations": 20000,
      "lr_schedule": [[0, 1e-3], [6667, 1e-4], [13333, 1e-5]],
      "lambda": 1e-6,
      "log_every": 50
    }
  })json");
  const auto cfg = io::parse_train_config(j);
  CHECK(cfg.field_config.hidden_layers == 2);
  CHECK(cfg.field_config.hidden_width == 48);
  CHECK(cfg.field_config.omega0 == 25.0);
  CHECK(cfg.eps_config.hidden_width == 32);
  CHECK(cfg.train.field_seed == 7);
  CHECK(cfg.train.eps_seed == 8);
  CHECK(cfg.train.total_iterations == 20000);
  REQUIRE(cfg.train.lr_schedule.size() == 3);
  CHECK(cfg.train.lr_schedule[1].start_iteration == 6667);
  CHECK(cfg.train.lr_schedule[1].rate == 1e-4);
  CHECK(cfg.train.lambda == 1e-6);
  CHECK(cfg.train.log_every == 50);
  // Untouched defaults.
  CHECK(cfg.train.beta1 == 0.9);
  CHECK(cfg.train.beta2 == 0.999);
  CHECK(cfg.train.eps_hat == 1e-8);
}

TEST_CASE("malformed configs are rejected") {
  CHECK_THROWS(io::parse_generate_config(nlohmann::json::parse(
      R"json({"grid": {"dims": [9, 9]}})json")));
  CHECK_THROWS(io::parse_train_config(nlohmann::json::parse(
      R"json({"train": {"lr_schedule": [[10, 1e-3]]}})json")));
  CHECK_THROWS(io::parse_generate_config(nlohmann::json::parse(
      R"json({"grid": {"dims": [9,9,9], "extent_m": [0.1,0.1,0.1]},
              "mask": {"kind": "diagonal"}})json")));
}
