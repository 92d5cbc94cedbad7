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
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "eptpinn/mlp.hpp"

namespace eptpinn::physics {

/// Physical constants for one acquisition. Derived quantities are always
/// recomputed from the frequency so they cannot drift out of sync.
struct PhysicsConstants {
  double frequency_hz = 297.2e6;  // 7 T proton Larmor frequency

  static constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
  static constexpr double speed_of_light = 299792458.0;            // m/s

  double omega() const { return 2.0 * std::numbers::pi * frequency_hz; }
  double k0() const { return omega() / speed_of_light; }  // rad/m
};

/// Relative complex permittivity under the e^{+i omega t} convention:
/// eps_c = eps_r - i sigma / (omega eps0). Both parts dimensionless.
struct ComplexPermittivity {
  double re = 0.0;
  double im = 0.0;

  std::complex<double> as_complex() const { return {re, im}; }
};

ComplexPermittivity complex_permittivity(double eps_r, double sigma,
                                         const PhysicsConstants& k);

/// Inverse of complex_permittivity: (eps_r, sigma).
std::pair<double, double> eps_to_props(const ComplexPermittivity& eps,
                                       const PhysicsConstants& k);

/// Affine map between a physical bounding box (meters) and the normalized
/// cube [-1, 1]^3. Network inputs live in normalized coordinates; spatial
/// second derivatives pick up a factor scale()^2 per axis when converted
/// back to physical units.
struct CoordinateMap {
  Eigen::Vector3d lo = Eigen::Vector3d::Zero();
  Eigen::Vector3d hi = Eigen::Vector3d::Ones();

  void validate() const;
  Eigen::Vector3d to_normalized(const Eigen::Vector3d& physical) const;
  Eigen::Vector3d to_physical(const Eigen::Vector3d& normalized) const;
  /// Per-axis scale s_i = 2 / L_i in 1/m.
  Eigen::Vector3d scale() const;
};

/// Complex Helmholtz residual R_H = lap(B) + k0^2 eps_c B as two graph
/// nodes. The field jet carries normalized-coordinate Hessian entries; the
/// physical Laplacian applied here is sum_i s_i^2 h_ii.
struct ComplexResidual {
  ad::Var re;
  ad::Var im;
};

ComplexResidual helmholtz_residual(ad::Tape& tape,
                                   const net::TapedMlp::JetOutput& field,
                                   std::span<const ad::Var> eps_out,
                                   const PhysicsConstants& k,
                                   const CoordinateMap& map);

/// One measured sample: physical location and complex field value.
struct FieldSample {
  Eigen::Vector3d position;
  std::complex<double> value;
};

struct LossTerms {
  ad::Var total;
  ad::Var data;      // L_data
  ad::Var residual;  // L_r (unweighted)
};

/// Composite loss L = L_data + lambda * L_r over full batches, recorded on
/// the tape of the two networks. Points are given in physical coordinates.
LossTerms total_loss(ad::Tape& tape, std::span<const FieldSample> data_batch,
                     std::span<const Eigen::Vector3d> collocation_batch,
                     const net::TapedMlp& field_net,
                     const net::TapedMlp& eps_net, double lambda,
                     const PhysicsConstants& k, const CoordinateMap& map);

}  // namespace eptpinn::physics
