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

#include "eptpinn/physics.hpp"

#include <stdexcept>

namespace eptpinn::physics {

ComplexPermittivity complex_permittivity(double eps_r, double sigma,
                                         const PhysicsConstants& k) {
  if (!(k.omega() > 0.0)) {
    throw std::invalid_argument("complex_permittivity: omega must be > 0");
  }
  return {eps_r, -sigma / (k.omega() * PhysicsConstants::vacuum_permittivity)};
}

std::pair<double, double> eps_to_props(const ComplexPermittivity& eps,
                                       const PhysicsConstants& k) {
  if (!(k.omega() > 0.0)) {
    throw std::invalid_argument("eps_to_props: omega must be > 0");
  }
  return {eps.re, -eps.im * k.omega() * PhysicsConstants::vacuum_permittivity};
}

void CoordinateMap::validate() const {
  for (int i = 0; i < 3; ++i) {
    if (!(hi[i] > lo[i])) {
      throw std::invalid_argument("CoordinateMap: box must have positive extent");
    }
  }
}

Eigen::Vector3d CoordinateMap::to_normalized(
    const Eigen::Vector3d& physical) const {
  const Eigen::Vector3d center = 0.5 * (lo + hi);
  return (physical - center).cwiseProduct(scale());
}

Eigen::Vector3d CoordinateMap::to_physical(
    const Eigen::Vector3d& normalized) const {
  const Eigen::Vector3d center = 0.5 * (lo + hi);
  return center + normalized.cwiseQuotient(scale());
}

Eigen::Vector3d CoordinateMap::scale() const {
  return Eigen::Vector3d(2.0 / (hi[0] - lo[0]), 2.0 / (hi[1] - lo[1]),
                         2.0 / (hi[2] - lo[2]));
}

ComplexResidual helmholtz_residual(ad::Tape& tape,
                                   const net::TapedMlp::JetOutput& field,
                                   std::span<const ad::Var> eps_out,
                                   const PhysicsConstants& k,
                                   const CoordinateMap& map) {
  if (field.value.size() != 2 || eps_out.size() != 2) {
    throw std::invalid_argument(
        "helmholtz_residual: field and eps must have 2 components");
  }
  const Eigen::Vector3d s = map.scale();
  const double k0sq = k.k0() * k.k0();

  // Physical Laplacian: sum_i s_i^2 * h_ii, per output component.
  std::array<ad::Var, 2> lap;
  for (int c = 0; c < 2; ++c) {
    ad::Var acc = tape.scale(field.hessian_diag[c][0], s[0] * s[0]);
    acc = tape.add(acc, tape.scale(field.hessian_diag[c][1], s[1] * s[1]));
    acc = tape.add(acc, tape.scale(field.hessian_diag[c][2], s[2] * s[2]));
    lap[c] = acc;
  }

  // k0^2 * (e_re + i e_im)(b_re + i b_im), expanded into real components.
  ad::Var b_re = field.value[0];
  ad::Var b_im = field.value[1];
  ad::Var e_re = eps_out[0];
  ad::Var e_im = eps_out[1];
  ad::Var prod_re = tape.sub(tape.mul(e_re, b_re), tape.mul(e_im, b_im));
  ad::Var prod_im = tape.add(tape.mul(e_re, b_im), tape.mul(e_im, b_re));

  ComplexResidual r;
  r.re = tape.add(lap[0], tape.scale(prod_re, k0sq));
  r.im = tape.add(lap[1], tape.scale(prod_im, k0sq));
  return r;
}

LossTerms total_loss(ad::Tape& tape, std::span<const FieldSample> data_batch,
                     std::span<const Eigen::Vector3d> collocation_batch,
                     const net::TapedMlp& field_net,
                     const net::TapedMlp& eps_net, double lambda,
                     const PhysicsConstants& k, const CoordinateMap& map) {
  if (data_batch.empty() || collocation_batch.empty()) {
    throw std::invalid_argument("total_loss: empty batch");
  }
  if (lambda < 0.0) {
    throw std::invalid_argument("total_loss: lambda must be >= 0");
  }

  std::vector<ad::Var> data_terms;
  data_terms.reserve(data_batch.size());
  for (const FieldSample& sample : data_batch) {
    const Eigen::Vector3d p = map.to_normalized(sample.position);
    const auto out = field_net.forward({p[0], p[1], p[2]});
    ad::Var dre = tape.shift(out[0], -sample.value.real());
    ad::Var dim = tape.shift(out[1], -sample.value.imag());
    data_terms.push_back(tape.add(tape.square(dre), tape.square(dim)));
  }
  ad::Var data_loss = tape.scale(tape.sum(data_terms),
                                 1.0 / static_cast<double>(data_batch.size()));

  std::vector<ad::Var> res_terms;
  res_terms.reserve(collocation_batch.size());
  for (const Eigen::Vector3d& pos : collocation_batch) {
    const Eigen::Vector3d p = map.to_normalized(pos);
    const std::array<double, 3> pt = {p[0], p[1], p[2]};
    const auto jet = field_net.forward_jet(pt);
    const auto eps = eps_net.forward(pt);
    const ComplexResidual r = helmholtz_residual(tape, jet, eps, k, map);
    res_terms.push_back(tape.add(tape.square(r.re), tape.square(r.im)));
  }
  ad::Var res_loss =
      tape.scale(tape.sum(res_terms),
                 1.0 / static_cast<double>(collocation_batch.size()));

  LossTerms terms;
  terms.data = data_loss;
  terms.residual = res_loss;
  terms.total = tape.add(data_loss, tape.scale(res_loss, lambda));
  return terms;
}

}  // namespace eptpinn::physics
