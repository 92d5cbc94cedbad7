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

#include "eptpinn/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "eptpinn/rng.hpp"

namespace eptpinn::net {

void MlpConfig::validate() const {
  if (input_dim != 3) {
    throw std::invalid_argument("MlpConfig: input_dim must be 3");
  }
  if (hidden_layers < 1 || hidden_width < 1) {
    throw std::invalid_argument(
        "MlpConfig: hidden_layers and hidden_width must be >= 1");
  }
  if (output_dim < 1) {
    throw std::invalid_argument("MlpConfig: output_dim must be >= 1");
  }
  if (!(omega0 > 0.0)) {
    throw std::invalid_argument("MlpConfig: omega0 must be > 0");
  }
}

std::size_t MlpConfig::parameter_count() const {
  std::size_t n = 0;
  int in = input_dim;
  for (int l = 0; l < hidden_layers; ++l) {
    n += static_cast<std::size_t>(hidden_width) * in + hidden_width;
    in = hidden_width;
  }
  n += static_cast<std::size_t>(output_dim) * in + output_dim;
  return n;
}

namespace {

std::vector<std::pair<int, int>> layer_shapes(const MlpConfig& c) {
  std::vector<std::pair<int, int>> shapes;  // (out, in)
  int in = c.input_dim;
  for (int l = 0; l < c.hidden_layers; ++l) {
    shapes.emplace_back(c.hidden_width, in);
    in = c.hidden_width;
  }
  shapes.emplace_back(c.output_dim, in);
  return shapes;
}

}  // namespace

Eigen::VectorXd MlpParams::flatten() const {
  Eigen::VectorXd flat(parameter_count());
  Eigen::Index pos = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    const Eigen::MatrixXd& w = weights[l];
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      flat.segment(pos, w.cols()) = w.row(i).transpose();
      pos += w.cols();
    }
    flat.segment(pos, biases[l].size()) = biases[l];
    pos += biases[l].size();
  }
  return flat;
}

MlpParams MlpParams::unflatten(const MlpConfig& config,
                               const Eigen::VectorXd& flat) {
  config.validate();
  if (static_cast<std::size_t>(flat.size()) != config.parameter_count()) {
    throw std::invalid_argument("unflatten: parameter vector length mismatch");
  }
  MlpParams p;
  p.config = config;
  Eigen::Index pos = 0;
  for (const auto& [out, in] : layer_shapes(config)) {
    Eigen::MatrixXd w(out, in);
    for (int i = 0; i < out; ++i) {
      w.row(i) = flat.segment(pos, in).transpose();
      pos += in;
    }
    p.weights.push_back(std::move(w));
    p.biases.emplace_back(flat.segment(pos, out));
    pos += out;
  }
  return p;
}

MlpParams init_sine_mlp(const MlpConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  MlpParams p;
  p.config = config;
  const auto shapes = layer_shapes(config);
  for (std::size_t l = 0; l < shapes.size(); ++l) {
    const auto [out, in] = shapes[l];
    const double bound = (l == 0)
                             ? 1.0 / config.input_dim
                             : std::sqrt(6.0 / in) / config.omega0;
    Eigen::MatrixXd w(out, in);
    for (int i = 0; i < out; ++i) {
      for (int j = 0; j < in; ++j) {
        w(i, j) = rng.uniform_symmetric(bound);
      }
    }
    p.weights.push_back(std::move(w));
    p.biases.push_back(Eigen::VectorXd::Zero(out));
  }
  return p;
}

Eigen::VectorXd forward(const MlpParams& params,
                        const std::array<double, 3>& point) {
  Eigen::VectorXd a(3);
  a << point[0], point[1], point[2];
  const std::size_t layers = params.weights.size();
  for (std::size_t l = 0; l + 1 < layers; ++l) {
    Eigen::VectorXd u = params.weights[l] * a + params.biases[l];
    if (l == 0) u *= params.config.omega0;
    a = u.array().sin().matrix();
  }
  return params.weights.back() * a + params.biases.back();
}

TapedMlp::TapedMlp(ad::Tape& tape, const MlpParams& params)
    : tape_(&tape), config_(params.config) {
  config_.validate();
  param_nodes_.reserve(params.parameter_count());
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    const Eigen::MatrixXd& w = params.weights[l];
    std::vector<std::vector<ad::Var>> rows(w.rows());
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      rows[i].reserve(w.cols());
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        ad::Var v = tape.parameter(w(i, j));
        rows[i].push_back(v);
        param_nodes_.push_back(v);
      }
    }
    weight_nodes_.push_back(std::move(rows));
    std::vector<ad::Var> bias(params.biases[l].size());
    for (Eigen::Index i = 0; i < params.biases[l].size(); ++i) {
      bias[i] = tape.parameter(params.biases[l](i));
      param_nodes_.push_back(bias[i]);
    }
    bias_nodes_.push_back(std::move(bias));
  }
}

std::vector<ad::Var> TapedMlp::forward(
    const std::array<double, 3>& point) const {
  ad::Tape& t = *tape_;
  std::vector<ad::Var> a(3);
  for (int i = 0; i < 3; ++i) a[i] = t.leaf(point[i]);

  const std::size_t layers = weight_nodes_.size();
  std::vector<ad::Var> terms;
  for (std::size_t l = 0; l < layers; ++l) {
    const auto& w = weight_nodes_[l];
    std::vector<ad::Var> next(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      terms.resize(a.size());
      for (std::size_t j = 0; j < a.size(); ++j) {
        terms[j] = t.mul(w[i][j], a[j]);
      }
      ad::Var u = t.add(t.sum(terms), bias_nodes_[l][i]);
      if (l + 1 == layers) {
        next[i] = u;  // linear output layer
      } else {
        if (l == 0) u = t.scale(u, config_.omega0);
        next[i] = t.sin(u);
      }
    }
    a = std::move(next);
  }
  return a;
}

TapedMlp::JetOutput TapedMlp::forward_jet(
    const std::array<double, 3>& point) const {
  ad::Tape& t = *tape_;
  const auto seeds = ad::jet_seed(t, point);
  std::vector<ad::Jet3> a(seeds.begin(), seeds.end());

  const std::size_t layers = weight_nodes_.size();
  for (std::size_t l = 0; l < layers; ++l) {
    const auto& w = weight_nodes_[l];
    std::vector<ad::Jet3> next(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      ad::Jet3 u = ad::jet_affine(w[i], a, bias_nodes_[l][i]);
      if (l + 1 == layers) {
        next[i] = u;
      } else {
        if (l == 0) u = ad::jet_scale(u, config_.omega0);
        next[i] = ad::jet_sin(u);
      }
    }
    a = std::move(next);
  }

  JetOutput out;
  out.value.reserve(a.size());
  out.laplacian.reserve(a.size());
  out.hessian_diag.reserve(a.size());
  for (const ad::Jet3& j : a) {
    out.value.push_back(j.v);
    out.laplacian.push_back(ad::laplacian(j));
    out.hessian_diag.push_back({j.h[0], j.h[3], j.h[5]});
  }
  return out;
}

}  // namespace eptpinn::net
