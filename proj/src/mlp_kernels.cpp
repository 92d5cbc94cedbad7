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

#include "mlp_kernels.hpp"

#include "vsincos.hpp"

namespace eptpinn::net::detail {

namespace {

// Row block of channel c in a stacked matrix.
inline auto channel(RowMat& m, Eigen::Index c, Eigen::Index b) {
  return m.middleRows(c * b, b);
}

inline auto channel(const RowMat& m, Eigen::Index c, Eigen::Index b) {
  return m.middleRows(c * b, b);
}

}  // namespace

void zero_grads_like(const MlpParams& p, std::vector<Eigen::MatrixXd>& wg,
                     std::vector<Eigen::VectorXd>& bg) {
  wg.clear();
  bg.clear();
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    wg.emplace_back(Eigen::MatrixXd::Zero(p.weights[l].rows(),
                                          p.weights[l].cols()));
    bg.emplace_back(Eigen::VectorXd::Zero(p.biases[l].size()));
  }
}

Eigen::VectorXd flatten_grads(const MlpConfig& config,
                              std::vector<Eigen::MatrixXd>&& wg,
                              std::vector<Eigen::VectorXd>&& bg) {
  MlpParams shaped;
  shaped.config = config;
  shaped.weights = std::move(wg);
  shaped.biases = std::move(bg);
  return shaped.flatten();
}

void JetChunk::forward(const MlpParams& p,
                       const Eigen::Ref<const Eigen::MatrixX3d>& x) {
  const Eigen::Index b = x.rows();
  rows_ = b;
  x_ = x;
  const std::size_t hidden = p.weights.size() - 1;
  layers_.resize(hidden);

  for (std::size_t l = 0; l < hidden; ++l) {
    Layer& layer = layers_[l];
    layer.omega = (l == 0) ? p.config.omega0 : 1.0;
    const Eigen::MatrixXd& w = p.weights[l];
    const Eigen::Index width = w.rows();
    layer.u.resize(kChannels * b, width);

    if (l == 0) {
      // Seed jets: value = x, gradient channels are constant rows equal to
      // the corresponding weight column, curvature channels start at zero.
      channel(layer.u, 0, b).noalias() = x * w.transpose();
      channel(layer.u, 0, b).rowwise() += p.biases[l].transpose();
      for (int d = 0; d < 3; ++d) {
        channel(layer.u, 1 + d, b) = w.col(d).transpose().replicate(b, 1);
        channel(layer.u, 4 + d, b).setZero();
      }
    } else {
      layer.u.noalias() = layers_[l - 1].a * w.transpose();
      channel(layer.u, 0, b).rowwise() += p.biases[l].transpose();
    }

    const double omega = layer.omega;
    layer.a.resize(kChannels * b, width);
    layer.cosu.resize(b, width);
    auto uv = channel(layer.u, 0, b);
    auto av = channel(layer.a, 0, b);
    if (omega == 1.0) {
      eptpinn::detail::vsincos(uv.data(), av.data(), layer.cosu.data(),
                               b * width);
    } else {
      arg_ = omega * uv;
      eptpinn::detail::vsincos(arg_.data(), av.data(), layer.cosu.data(),
                               b * width);
    }
    const auto s = channel(layer.a, 0, b);
    for (int d = 0; d < 3; ++d) {
      const auto ug = channel(layer.u, 1 + d, b);
      const auto uh = channel(layer.u, 4 + d, b);
      channel(layer.a, 1 + d, b) = omega * (layer.cosu.array() * ug.array());
      channel(layer.a, 4 + d, b) =
          omega * (layer.cosu.array() * uh.array()) -
          omega * omega * (s.array() * ug.array().square());
    }
  }

  const Eigen::MatrixXd& wo = p.weights.back();
  const RowMat& a_last = layers_.back().a;
  y_.noalias() = channel(a_last, 0, b) * wo.transpose();
  y_.rowwise() += p.biases.back().transpose();
  for (int d = 0; d < 3; ++d) {
    hdiag_[d].noalias() = channel(a_last, 4 + d, b) * wo.transpose();
  }
}

void JetChunk::backward(const MlpParams& p, const Eigen::MatrixXd& value_bar,
                        const std::array<Eigen::MatrixXd, 3>& hdiag_bar,
                        std::vector<Eigen::MatrixXd>& weight_grad,
                        std::vector<Eigen::VectorXd>& bias_grad) const {
  const Eigen::Index b = rows_;
  const std::size_t hidden = layers_.size();
  const Eigen::MatrixXd& wo = p.weights.back();
  const RowMat& a_last = layers_.back().a;

  // Output layer: y = a_v Wo^T + bo, hdiag_d = a_hd Wo^T.
  weight_grad.back().noalias() += value_bar.transpose() * channel(a_last, 0, b);
  for (int d = 0; d < 3; ++d) {
    weight_grad.back().noalias() +=
        hdiag_bar[d].transpose() * channel(a_last, 4 + d, b);
  }
  bias_grad.back().noalias() += value_bar.colwise().sum().transpose();

  RowMat abar(kChannels * b, wo.cols());
  channel(abar, 0, b).noalias() = value_bar * wo;
  for (int d = 0; d < 3; ++d) {
    channel(abar, 1 + d, b).setZero();
    channel(abar, 4 + d, b).noalias() = hdiag_bar[d] * wo;
  }

  RowMat ubar;
  for (std::size_t l = hidden; l-- > 0;) {
    const Layer& layer = layers_[l];
    const double omega = layer.omega;
    const Eigen::Index width = layer.a.cols();
    ubar.resize(kChannels * b, width);

    const auto s = channel(layer.a, 0, b);
    const auto& c = layer.cosu;
    // value channel adjoint gathers the curvature of the activation.
    {
      auto uv_bar = channel(ubar, 0, b);
      uv_bar = omega * (channel(abar, 0, b).array() * c.array()).matrix();
      for (int d = 0; d < 3; ++d) {
        const auto ug = channel(layer.u, 1 + d, b);
        const auto uh = channel(layer.u, 4 + d, b);
        const auto gbar = channel(abar, 1 + d, b);
        const auto hbar = channel(abar, 4 + d, b);
        uv_bar.array() -= omega * omega * gbar.array() * s.array() * ug.array();
        uv_bar.array() -=
            hbar.array() * (omega * omega * s.array() * uh.array() +
                            omega * omega * omega * c.array() *
                                ug.array().square());
      }
    }
    for (int d = 0; d < 3; ++d) {
      const auto ug = channel(layer.u, 1 + d, b);
      const auto gbar = channel(abar, 1 + d, b);
      const auto hbar = channel(abar, 4 + d, b);
      channel(ubar, 1 + d, b) =
          (omega * gbar.array() * c.array() -
           2.0 * omega * omega * hbar.array() * s.array() * ug.array())
              .matrix();
      channel(ubar, 4 + d, b) = omega * (hbar.array() * c.array()).matrix();
    }

    bias_grad[l].noalias() += channel(ubar, 0, b).colwise().sum().transpose();
    if (l == 0) {
      weight_grad[0].noalias() += channel(ubar, 0, b).transpose() * x_;
      for (int d = 0; d < 3; ++d) {
        // u_gd rows replicate weight column d.
        weight_grad[0].col(d).noalias() +=
            channel(ubar, 1 + d, b).colwise().sum().transpose();
      }
    } else {
      const Eigen::MatrixXd& w = p.weights[l];
      weight_grad[l].noalias() += ubar.transpose() * layers_[l - 1].a;
      abar.resize(kChannels * b, w.cols());
      abar.noalias() = ubar * w;
    }
  }
}

void PlainChunk::forward(const MlpParams& p,
                         const Eigen::Ref<const Eigen::MatrixX3d>& x) {
  x_ = x;
  const Eigen::Index b = x.rows();
  const std::size_t hidden = p.weights.size() - 1;
  layers_.resize(hidden);

  for (std::size_t l = 0; l < hidden; ++l) {
    Layer& layer = layers_[l];
    layer.omega = (l == 0) ? p.config.omega0 : 1.0;
    const Eigen::Index width = p.weights[l].rows();
    if (l == 0) {
      arg_.noalias() = x * p.weights[l].transpose();
    } else {
      arg_.noalias() = layers_[l - 1].a * p.weights[l].transpose();
    }
    arg_.rowwise() += p.biases[l].transpose();
    if (layer.omega != 1.0) arg_ *= layer.omega;
    layer.a.resize(b, width);
    layer.cosu.resize(b, width);
    eptpinn::detail::vsincos(arg_.data(), layer.a.data(), layer.cosu.data(),
                             b * width);
  }

  y_.noalias() = layers_.back().a * p.weights.back().transpose();
  y_.rowwise() += p.biases.back().transpose();
}

void PlainChunk::backward(const MlpParams& p, const Eigen::MatrixXd& value_bar,
                          std::vector<Eigen::MatrixXd>& weight_grad,
                          std::vector<Eigen::VectorXd>& bias_grad) const {
  const std::size_t hidden = layers_.size();

  weight_grad.back().noalias() += value_bar.transpose() * layers_.back().a;
  bias_grad.back().noalias() += value_bar.colwise().sum().transpose();

  RowMat abar = value_bar * p.weights.back();
  for (std::size_t l = hidden; l-- > 0;) {
    const Layer& layer = layers_[l];
    const RowMat ubar =
        (layer.omega * abar.array() * layer.cosu.array()).matrix();
    bias_grad[l].noalias() += ubar.colwise().sum().transpose();
    if (l == 0) {
      weight_grad[0].noalias() += ubar.transpose() * x_;
    } else {
      weight_grad[l].noalias() += ubar.transpose() * layers_[l - 1].a;
      abar = ubar * p.weights[l];
    }
  }
}

}  // namespace eptpinn::net::detail
