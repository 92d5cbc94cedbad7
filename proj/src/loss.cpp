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

#include "eptpinn/loss.hpp"

#include <stdexcept>

#include "mlp_kernels.hpp"

namespace eptpinn::train {

void LossBatches::validate() const {
  const Eigen::Index n = colloc_norm.rows();
  if (n == 0) {
    throw std::invalid_argument("LossBatches: empty collocation batch");
  }
  if (data_weight.size() != n || measurements.rows() != n) {
    throw std::invalid_argument("LossBatches: row count mismatch");
  }
  if (n_data() == 0) {
    throw std::invalid_argument("LossBatches: empty data batch");
  }
  if (lambda < 0.0) {
    throw std::invalid_argument("LossBatches: lambda must be >= 0");
  }
  if (!(k0sq > 0.0)) {
    throw std::invalid_argument("LossBatches: k0^2 must be > 0");
  }
}

namespace {

struct Accumulator {
  double data_sum = 0.0;
  double res_sum = 0.0;
};

// Shared per-chunk head: loss sums plus, when grads are requested, the
// adjoints pushed back through both networks.
template <bool WithGrad>
void run_chunks(const net::MlpParams& field_params,
                const net::MlpParams& eps_params, const LossBatches& b,
                Eigen::Index chunk_rows, Accumulator& acc,
                std::vector<Eigen::MatrixXd>* wg_field,
                std::vector<Eigen::VectorXd>* bg_field,
                std::vector<Eigen::MatrixXd>* wg_eps,
                std::vector<Eigen::VectorXd>* bg_eps) {
  const Eigen::Index n = b.colloc_norm.rows();
  const double n_data = static_cast<double>(b.n_data());
  const double inv_nd = 1.0 / n_data;
  const double inv_nc = 1.0 / static_cast<double>(n);
  const double res_bar = 2.0 * b.lambda * inv_nc;

  net::detail::JetChunk jet;
  net::detail::PlainChunk plain;

  for (Eigen::Index start = 0; start < n; start += chunk_rows) {
    const Eigen::Index rows = std::min(chunk_rows, n - start);
    const auto x = b.colloc_norm.middleRows(start, rows);
    jet.forward(field_params, x);
    plain.forward(eps_params, x);

    const auto y0 = jet.value().col(0).array();
    const auto y1 = jet.value().col(1).array();
    const auto e0 = plain.value().col(0).array();
    const auto e1 = plain.value().col(1).array();

    Eigen::ArrayXd lap0 = b.lap_scale[0] * jet.hdiag(0).col(0).array();
    Eigen::ArrayXd lap1 = b.lap_scale[0] * jet.hdiag(0).col(1).array();
    for (int d = 1; d < 3; ++d) {
      lap0 += b.lap_scale[d] * jet.hdiag(d).col(0).array();
      lap1 += b.lap_scale[d] * jet.hdiag(d).col(1).array();
    }

    const Eigen::ArrayXd r_re = lap0 + b.k0sq * (e0 * y0 - e1 * y1);
    const Eigen::ArrayXd r_im = lap1 + b.k0sq * (e0 * y1 + e1 * y0);
    acc.res_sum += (r_re.square() + r_im.square()).sum();

    const auto w = b.data_weight.segment(start, rows).array();
    const Eigen::ArrayXd d0 =
        y0 - b.measurements.col(0).segment(start, rows).array();
    const Eigen::ArrayXd d1 =
        y1 - b.measurements.col(1).segment(start, rows).array();
    acc.data_sum += (w * (d0.square() + d1.square())).sum();

    if constexpr (WithGrad) {
      const Eigen::ArrayXd rbar_re = res_bar * r_re;
      const Eigen::ArrayXd rbar_im = res_bar * r_im;

      Eigen::MatrixXd lap_bar(rows, 2);
      lap_bar.col(0) = rbar_re.matrix();
      lap_bar.col(1) = rbar_im.matrix();
      std::array<Eigen::MatrixXd, 3> hd_bar;
      for (int d = 0; d < 3; ++d) hd_bar[d] = b.lap_scale[d] * lap_bar;

      Eigen::MatrixXd y_bar(rows, 2);
      y_bar.col(0) = (b.k0sq * (rbar_re * e0 + rbar_im * e1) +
                      2.0 * inv_nd * w * d0)
                         .matrix();
      y_bar.col(1) = (b.k0sq * (rbar_im * e0 - rbar_re * e1) +
                      2.0 * inv_nd * w * d1)
                         .matrix();

      Eigen::MatrixXd e_bar(rows, 2);
      e_bar.col(0) = (b.k0sq * (rbar_re * y0 + rbar_im * y1)).matrix();
      e_bar.col(1) = (b.k0sq * (rbar_im * y0 - rbar_re * y1)).matrix();

      jet.backward(field_params, y_bar, hd_bar, *wg_field, *bg_field);
      plain.backward(eps_params, e_bar, *wg_eps, *bg_eps);
    }
  }
}

void check_inputs(const net::MlpParams& field_params,
                  const net::MlpParams& eps_params, const LossBatches& b,
                  Eigen::Index chunk_rows) {
  b.validate();
  field_params.config.validate();
  eps_params.config.validate();
  if (field_params.config.output_dim != 2 || eps_params.config.output_dim != 2) {
    throw std::invalid_argument("loss: both networks must have 2 outputs");
  }
  if (chunk_rows < 1) {
    throw std::invalid_argument("loss: chunk_rows must be >= 1");
  }
}

}  // namespace

LossValueGrad loss_and_gradient(const net::MlpParams& field_params,
                                const net::MlpParams& eps_params,
                                const LossBatches& batches,
                                Eigen::Index chunk_rows) {
  check_inputs(field_params, eps_params, batches, chunk_rows);

  std::vector<Eigen::MatrixXd> wg_field, wg_eps;
  std::vector<Eigen::VectorXd> bg_field, bg_eps;
  net::detail::zero_grads_like(field_params, wg_field, bg_field);
  net::detail::zero_grads_like(eps_params, wg_eps, bg_eps);

  Accumulator acc;
  run_chunks<true>(field_params, eps_params, batches, chunk_rows, acc,
                   &wg_field, &bg_field, &wg_eps, &bg_eps);

  LossValueGrad out;
  out.value.data = acc.data_sum / static_cast<double>(batches.n_data());
  out.value.residual =
      acc.res_sum / static_cast<double>(batches.colloc_norm.rows());
  out.value.total = out.value.data + batches.lambda * out.value.residual;
  out.grad_field = net::detail::flatten_grads(
      field_params.config, std::move(wg_field), std::move(bg_field));
  out.grad_eps = net::detail::flatten_grads(eps_params.config,
                                            std::move(wg_eps),
                                            std::move(bg_eps));
  return out;
}

LossValue loss_only(const net::MlpParams& field_params,
                    const net::MlpParams& eps_params,
                    const LossBatches& batches, Eigen::Index chunk_rows) {
  check_inputs(field_params, eps_params, batches, chunk_rows);
  Accumulator acc;
  run_chunks<false>(field_params, eps_params, batches, chunk_rows, acc,
                    nullptr, nullptr, nullptr, nullptr);
  LossValue v;
  v.data = acc.data_sum / static_cast<double>(batches.n_data());
  v.residual = acc.res_sum / static_cast<double>(batches.colloc_norm.rows());
  v.total = v.data + batches.lambda * v.residual;
  return v;
}

}  // namespace eptpinn::train
