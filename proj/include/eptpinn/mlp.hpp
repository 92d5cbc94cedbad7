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

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

#include "eptpinn/jet.hpp"

namespace eptpinn::net {

/// Fully connected coordinate network with sine activations. The first
/// hidden layer applies the frequency factor inside the activation,
/// sin(omega0 * (W x + b)); deeper hidden layers use sin(W a + b); the
/// output layer is linear.
struct MlpConfig {
  int input_dim = 3;
  int hidden_layers = 3;
  int hidden_width = 128;
  int output_dim = 2;
  double omega0 = 30.0;

  void validate() const;
  std::size_t parameter_count() const;
};

/// Per-layer weights and biases. weights[l] is (out x in); the flattened
/// view concatenates, layer by layer, the row-major weight matrix followed
/// by the bias vector.
struct MlpParams {
  MlpConfig config;
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  std::size_t parameter_count() const { return config.parameter_count(); }
  Eigen::VectorXd flatten() const;
  static MlpParams unflatten(const MlpConfig& config,
                             const Eigen::VectorXd& flat);
};

/// Sine-network initialization: first-layer weights uniform on
/// [-1/input_dim, 1/input_dim], deeper weights uniform on
/// [-sqrt(6/fan_in)/omega0, sqrt(6/fan_in)/omega0], biases zero.
/// Deterministic for a given seed.
MlpParams init_sine_mlp(const MlpConfig& config, std::uint64_t seed);

/// Plain (tape-free) evaluation at one point in normalized coordinates.
Eigen::VectorXd forward(const MlpParams& params,
                        const std::array<double, 3>& point);

/// Network evaluation recorded on a tape, with every weight and bias
/// registered as a parameter leaf (in flatten() order). Supports value-only
/// evaluation and jet evaluation that yields exact spatial Laplacians as
/// differentiable graph nodes.
class TapedMlp {
 public:
  TapedMlp(ad::Tape& tape, const MlpParams& params);

  struct JetOutput {
    std::vector<ad::Var> value;
    std::vector<ad::Var> laplacian;          // h_xx + h_yy + h_zz, normalized coords
    std::vector<std::array<ad::Var, 3>> hessian_diag;  // per-axis, normalized coords
  };

  std::vector<ad::Var> forward(const std::array<double, 3>& point) const;
  JetOutput forward_jet(const std::array<double, 3>& point) const;

  const std::vector<ad::Var>& parameter_nodes() const { return param_nodes_; }
  const MlpConfig& config() const { return config_; }

 private:
  ad::Tape* tape_;
  MlpConfig config_;
  // Views into param_nodes_, mirroring MlpParams layout.
  std::vector<std::vector<std::vector<ad::Var>>> weight_nodes_;  // [layer][out][in]
  std::vector<std::vector<ad::Var>> bias_nodes_;                 // [layer][out]
  std::vector<ad::Var> param_nodes_;
};

}  // namespace eptpinn::net
