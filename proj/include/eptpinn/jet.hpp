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

#include <array>
#include <span>

#include "eptpinn/autodiff.hpp"

namespace eptpinn::ad {

/// Second-order jet in the three spatial coordinates: value, gradient and
/// the upper triangle of the symmetric spatial Hessian. Every component is
/// a graph node, so spatial derivatives stay differentiable with respect to
/// any parameter leaves they were built from.
///
/// Hessian entry order: xx, xy, xz, yy, yz, zz.
struct Jet3 {
  Var v;
  std::array<Var, 3> g;
  std::array<Var, 6> h;
};

inline constexpr std::array<std::pair<int, int>, 6> kHessianIndex = {
    {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}};

/// Flat Hessian slot for the (i, j) coordinate pair.
int hessian_slot(int i, int j);

/// Seeds the three coordinate inputs: jet i has v = coords[i], g = e_i,
/// h = 0, all exact.
std::array<Jet3, 3> jet_seed(Tape& tape, const std::array<double, 3>& coords);

/// Jet of a spatially constant value (derivatives identically zero).
Jet3 jet_constant(Tape& tape, double c);

/// Jet of a spatially constant graph scalar, e.g. a network parameter.
Jet3 jet_from_scalar(Var s);

Jet3 jet_add(const Jet3& a, const Jet3& b);
Jet3 jet_sub(const Jet3& a, const Jet3& b);
Jet3 jet_mul(const Jet3& a, const Jet3& b);
Jet3 jet_scale(const Jet3& a, double c);
Jet3 jet_sin(const Jet3& a);

/// sum_k weights[k] * inputs[k] + bias, with graph-scalar coefficients.
/// This is the workhorse of network layers; it keeps the recorded graph
/// much smaller than composing jet_mul over constant-extended jets.
Jet3 jet_affine(std::span<const Var> weights, std::span<const Jet3> inputs,
                Var bias);

/// h_xx + h_yy + h_zz as a graph node.
Var laplacian(const Jet3& j);

}  // namespace eptpinn::ad
