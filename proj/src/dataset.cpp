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

#include "eptpinn/dataset.hpp"

#include <stdexcept>

#include "eptpinn/rng.hpp"

namespace eptpinn::sim {

void MaskSpec::validate() const {
  if (axis < 0 || axis > 2) {
    throw std::invalid_argument("MaskSpec: axis must be 0, 1 or 2");
  }
}

void SyntheticDataset::validate() const {
  grid.validate();
  const auto n = static_cast<std::size_t>(grid.size());
  if (field.size() != n || noisy_field.size() != n ||
      interior_mask.size() != n || availability_mask.size() != n ||
      eps_r_truth.size() != n || sigma_truth.size() != n) {
    throw std::invalid_argument("SyntheticDataset: array size mismatch");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (availability_mask[i] && !interior_mask[i]) {
      throw std::invalid_argument(
          "SyntheticDataset: availability mask exceeds the interior");
    }
    if (availability_mask[i] && (!std::isfinite(noisy_field[i].real()) ||
                                 !std::isfinite(noisy_field[i].imag()))) {
      throw std::invalid_argument(
          "SyntheticDataset: non-finite sample inside the availability mask");
    }
  }
}

Eigen::Index SyntheticDataset::available_count() const {
  Eigen::Index n = 0;
  for (auto v : availability_mask) n += v;
  return n;
}

Eigen::Index SyntheticDataset::interior_count() const {
  Eigen::Index n = 0;
  for (auto v : interior_mask) n += v;
  return n;
}

std::vector<std::complex<double>> add_noise(
    const std::vector<std::complex<double>>& field,
    const std::vector<std::uint8_t>& interior_mask,
    std::optional<double> peak_snr, std::uint64_t seed) {
  if (field.size() != interior_mask.size()) {
    throw std::invalid_argument("add_noise: mask size mismatch");
  }
  std::vector<std::complex<double>> noisy = field;
  if (!peak_snr.has_value()) return noisy;
  if (!(*peak_snr > 0.0)) {
    throw std::invalid_argument("add_noise: peak_snr must be > 0");
  }

  double peak = 0.0;
  for (const auto& v : field) peak = std::max(peak, std::abs(v));
  const double sigma_n = peak / *peak_snr;
  const double component_std = sigma_n / std::sqrt(2.0);

  Rng rng(seed);
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (!interior_mask[i]) continue;
    const double re = component_std * rng.normal();
    const double im = component_std * rng.normal();
    noisy[i] += std::complex<double>(re, im);
  }
  return noisy;
}

void apply_mask(SyntheticDataset& dataset, const MaskSpec& mask) {
  mask.validate();
  dataset.mask = mask;
  dataset.availability_mask = dataset.interior_mask;
  if (mask.kind == MaskKind::kFull) return;

  const Grid& g = dataset.grid;
  const double midpoint =
      g.origin[mask.axis] + 0.5 * g.extent()[mask.axis];
  Eigen::Index idx = 0;
  for (int kk = 0; kk < g.dims[2]; ++kk) {
    for (int jj = 0; jj < g.dims[1]; ++jj) {
      for (int ii = 0; ii < g.dims[0]; ++ii, ++idx) {
        if (!dataset.availability_mask[idx]) continue;
        const double coord = g.point(ii, jj, kk)[mask.axis];
        const bool in_dropped_half =
            mask.upper ? coord > midpoint : coord < midpoint;
        if (in_dropped_half) dataset.availability_mask[idx] = 0;
      }
    }
  }
}

SyntheticDataset generate_dataset(const GenerateConfig& config,
                                  const SolverOptions& solver) {
  SyntheticDataset ds;
  ds.grid = config.grid;
  ds.constants = config.constants;
  ds.phantom = config.phantom;
  ds.peak_snr = config.peak_snr;
  ds.noise_seed = config.seed;

  const auto raster = rasterize_phantom(config.phantom, config.grid,
                                        config.constants);
  ds.interior_mask = raster.interior;
  ds.eps_r_truth = raster.eps_r;
  ds.sigma_truth = raster.sigma;

  auto solution = solve_helmholtz_fd(raster.eps_c, config.grid,
                                     config.constants, config.incidence,
                                     solver);
  ds.field = std::move(solution.field);
  ds.scale_factor = 1.0;  // fields are kept in solver units
  ds.noisy_field = add_noise(ds.field, ds.interior_mask, config.peak_snr,
                             config.seed);
  apply_mask(ds, config.mask);
  ds.validate();
  return ds;
}

}  // namespace eptpinn::sim
