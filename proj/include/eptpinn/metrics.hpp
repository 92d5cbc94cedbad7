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

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "eptpinn/phantom.hpp"

namespace eptpinn::eval {

/// Peak normalized absolute error in percent: mean over masked voxels of
/// |pred - truth| / max over the mask of |truth|, times 100.
double pnae(std::span<const double> pred, std::span<const double> truth,
            std::span<const std::uint8_t> mask);

/// Complex-field variant; the voxel error is the complex difference
/// magnitude.
double pnae(std::span<const std::complex<double>> pred,
            std::span<const std::complex<double>> truth,
            std::span<const std::uint8_t> mask);

struct SampledMaps {
  std::vector<std::complex<double>> b1;
  std::vector<double> eps_r;
  std::vector<double> sigma;
};

/// Evaluates both trained networks at every grid point (any resolution),
/// converting the permittivity outputs to (eps_r, sigma) and undoing the
/// training field scale. Points must fall inside the normalized cube of the
/// map; sampling never extrapolates.
SampledMaps sample_networks(const net::MlpParams& field_params,
                            const net::MlpParams& eps_params,
                            double field_scale, const sim::Grid& grid,
                            const physics::CoordinateMap& map,
                            const physics::PhysicsConstants& k);

enum class SliceComponent { kMagnitude, kReal, kImag, kPhase };

/// Axis slice of a voxel map as row-major values. Row/column axes follow
/// the remaining axes in (x, y, z) order with the faster axis as columns:
/// axis z -> rows y, cols x; axis y -> rows z, cols x; axis x -> rows z,
/// cols y.
std::vector<double> slice_values(std::span<const double> map,
                                 const sim::Grid& grid, int axis, int index);
std::vector<double> slice_values(std::span<const std::complex<double>> map,
                                 const sim::Grid& grid, int axis, int index,
                                 SliceComponent component);

/// Writes a slice as CSV with 17 significant digits per cell.
void export_slice(std::span<const double> map, const sim::Grid& grid, int axis,
                  int index, const std::string& path);
void export_slice(std::span<const std::complex<double>> map,
                  const sim::Grid& grid, int axis, int index,
                  SliceComponent component, const std::string& path);

}  // namespace eptpinn::eval
