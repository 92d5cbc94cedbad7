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

#include "eptpinn/batch.hpp"

#include "mlp_kernels.hpp"

namespace eptpinn::net {

namespace {
constexpr Eigen::Index kChunkRows = 1024;
}

Eigen::MatrixXd batch_forward(const MlpParams& params,
                              const Eigen::MatrixX3d& points) {
  params.config.validate();
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd out(n, params.config.output_dim);
  detail::PlainChunk chunk;
  for (Eigen::Index start = 0; start < n; start += kChunkRows) {
    const Eigen::Index b = std::min(kChunkRows, n - start);
    chunk.forward(params, points.middleRows(start, b));
    out.middleRows(start, b) = chunk.value();
  }
  return out;
}

BatchJet batch_forward_jet(const MlpParams& params,
                           const Eigen::MatrixX3d& points) {
  params.config.validate();
  const Eigen::Index n = points.rows();
  BatchJet result;
  result.value.resize(n, params.config.output_dim);
  for (auto& h : result.hdiag) h.resize(n, params.config.output_dim);

  detail::JetChunk chunk;
  for (Eigen::Index start = 0; start < n; start += kChunkRows) {
    const Eigen::Index b = std::min(kChunkRows, n - start);
    chunk.forward(params, points.middleRows(start, b));
    result.value.middleRows(start, b) = chunk.value();
    for (int d = 0; d < 3; ++d) {
      result.hdiag[d].middleRows(start, b) = chunk.hdiag(d);
    }
  }
  return result;
}

}  // namespace eptpinn::net
