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

#include "eptpinn/mlp.hpp"

namespace eptpinn::net {

/// Vectorized network evaluation over batches of normalized points.
///
/// These routines compute exactly the same quantities as the taped per-point
/// paths (forward / forward_jet), point for point, but propagate whole
/// batches through each layer with dense matrix products. Training-scale
/// workloads run through here; the taped path stays the reference that the
/// equivalence tests pin this implementation to.
///
/// The jet variant carries seven channels per activation: the value, the
/// three first derivatives, and the three diagonal second derivatives with
/// respect to the normalized coordinates. Off-diagonal Hessian entries never
/// feed a Laplacian through the layer recurrences (each Hessian entry
/// propagates independently, coupled only to the value and gradient
/// channels), so they are not carried here.

/// Values at each point: result is N x output_dim.
Eigen::MatrixXd batch_forward(const MlpParams& params,
                              const Eigen::MatrixX3d& points);

struct BatchJet {
  Eigen::MatrixXd value;                   // N x out
  std::array<Eigen::MatrixXd, 3> hdiag;    // d^2/dx_i^2, each N x out
  Eigen::MatrixXd laplacian() const { return hdiag[0] + hdiag[1] + hdiag[2]; }
};

BatchJet batch_forward_jet(const MlpParams& params,
                           const Eigen::MatrixX3d& points);

}  // namespace eptpinn::net
