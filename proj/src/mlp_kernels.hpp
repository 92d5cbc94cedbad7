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
#include <vector>

#include "eptpinn/mlp.hpp"

namespace eptpinn::net::detail {

// Row-major matrices so that the row blocks of a channel stack are
// contiguous memory, which the vectorized sin/cos kernel requires.
using RowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Channel-stacked jet propagation for one chunk of points, with the saved
// state needed for reverse mode. A stack is a (7B x w) matrix whose row
// blocks hold, in order, the value, the three coordinate derivatives and
// the three diagonal second derivatives of the B points.
//
// Activation rules for a = sin(omega u), with c = cos(omega u):
//   a_v  = sin(omega u_v)
//   a_gd = omega c u_gd
//   a_hd = omega c u_hd - omega^2 a_v u_gd^2
// and their transposes drive the backward pass.
class JetChunk {
 public:
  static constexpr Eigen::Index kChannels = 7;

  void forward(const MlpParams& p, const Eigen::Ref<const Eigen::MatrixX3d>& x);

  Eigen::Index rows() const { return rows_; }
  const Eigen::MatrixXd& value() const { return y_; }
  const Eigen::MatrixXd& hdiag(int d) const { return hdiag_[d]; }

  // Accumulates parameter gradients given adjoints of value() and hdiag().
  void backward(const MlpParams& p, const Eigen::MatrixXd& value_bar,
                const std::array<Eigen::MatrixXd, 3>& hdiag_bar,
                std::vector<Eigen::MatrixXd>& weight_grad,
                std::vector<Eigen::VectorXd>& bias_grad) const;

 private:
  struct Layer {
    RowMat u;     // pre-activation stack (7B x w)
    RowMat a;     // activation stack (7B x w)
    RowMat cosu;  // cos(omega u_v) (B x w)
    double omega = 1.0;
  };

  Eigen::Index rows_ = 0;
  Eigen::MatrixX3d x_;
  std::vector<Layer> layers_;
  RowMat arg_;  // scaled activation argument scratch
  Eigen::MatrixXd y_;
  std::array<Eigen::MatrixXd, 3> hdiag_;
};

// Value-only counterpart; used for the permittivity network and for dense
// resampling of trained networks.
class PlainChunk {
 public:
  void forward(const MlpParams& p, const Eigen::Ref<const Eigen::MatrixX3d>& x);

  const Eigen::MatrixXd& value() const { return y_; }

  void backward(const MlpParams& p, const Eigen::MatrixXd& value_bar,
                std::vector<Eigen::MatrixXd>& weight_grad,
                std::vector<Eigen::VectorXd>& bias_grad) const;

 private:
  struct Layer {
    RowMat a;     // activations (B x w)
    RowMat cosu;  // cos(omega u) (B x w)
    double omega = 1.0;
  };

  Eigen::MatrixX3d x_;
  std::vector<Layer> layers_;
  RowMat arg_;
  Eigen::MatrixXd y_;
};

// Zero-initialized gradient buffers shaped like the parameters.
void zero_grads_like(const MlpParams& p, std::vector<Eigen::MatrixXd>& wg,
                     std::vector<Eigen::VectorXd>& bg);

// Flattens gradient buffers in MlpParams::flatten order.
Eigen::VectorXd flatten_grads(const MlpConfig& config,
                              std::vector<Eigen::MatrixXd>&& wg,
                              std::vector<Eigen::VectorXd>&& bg);

}  // namespace eptpinn::net::detail
