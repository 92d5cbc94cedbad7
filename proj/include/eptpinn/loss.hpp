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

#include "eptpinn/mlp.hpp"
#include "eptpinn/physics.hpp"

namespace eptpinn::train {

/// Full-batch loss input, precomputed once per training run. The data batch
/// is encoded as a weight column over the collocation rows: collocation
/// covers every interior point, and rows with weight 1 additionally carry a
/// measurement. This matches the shared-location structure of the loss (the
/// measured points are always a subset of the collocation points) and lets
/// the field network be evaluated once per iteration.
struct LossBatches {
  Eigen::MatrixX3d colloc_norm;    // N x 3 normalized coordinates
  Eigen::VectorXd data_weight;     // N, 1 where a measurement exists, else 0
  Eigen::MatrixX2d measurements;   // N x 2 (Re, Im), zero rows where absent
  Eigen::Vector3d lap_scale;       // s_i^2 normalized->physical factors
  double k0sq = 0.0;
  double lambda = 0.0;

  Eigen::Index n_data() const {
    return static_cast<Eigen::Index>(data_weight.sum());
  }
  void validate() const;
};

struct LossValue {
  double total = 0.0;
  double data = 0.0;      // L_data
  double residual = 0.0;  // L_r, unweighted
};

struct LossValueGrad {
  LossValue value;
  Eigen::VectorXd grad_field;  // flattened, MlpParams::flatten order
  Eigen::VectorXd grad_eps;
};

/// Loss components and parameter gradients over the full batches,
/// mathematically identical to physics::total_loss followed by backward on
/// the recorded graph. Chunked over points; fixed chunk order keeps results
/// bitwise reproducible.
LossValueGrad loss_and_gradient(const net::MlpParams& field_params,
                                const net::MlpParams& eps_params,
                                const LossBatches& batches,
                                Eigen::Index chunk_rows = 256);

/// Loss components only (no gradients).
LossValue loss_only(const net::MlpParams& field_params,
                    const net::MlpParams& eps_params,
                    const LossBatches& batches, Eigen::Index chunk_rows = 256);

}  // namespace eptpinn::train
