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
#include <cstdint>
#include <optional>
#include <vector>

#include "eptpinn/phantom.hpp"
#include "eptpinn/solver.hpp"

namespace eptpinn::sim {

enum class MaskKind { kFull, kHalf };

struct MaskSpec {
  MaskKind kind = MaskKind::kFull;
  int axis = 0;        // 0, 1, 2 for x, y, z
  bool upper = true;   // which half is dropped

  void validate() const;
};

/// Synthetic measurement set: ground-truth field, its noisy counterpart,
/// masks, and the true property maps, all on one grid.
struct SyntheticDataset {
  Grid grid;
  physics::PhysicsConstants constants;
  PhantomSpec phantom;
  std::vector<std::complex<double>> field;        // true B1+
  std::vector<std::complex<double>> noisy_field;  // measured B1+
  std::vector<std::uint8_t> interior_mask;
  std::vector<std::uint8_t> availability_mask;
  std::vector<double> eps_r_truth;
  std::vector<double> sigma_truth;
  double scale_factor = 1.0;  // multiplier already applied to both fields
  std::optional<double> peak_snr;
  std::uint64_t noise_seed = 0;
  MaskSpec mask;

  void validate() const;
  Eigen::Index available_count() const;
  Eigen::Index interior_count() const;
};

/// Noise model for "peak SNR": sigma_n = max |field| / peak_snr, added as
/// independent zero-mean Gaussians of std sigma_n / sqrt(2) on the real and
/// imaginary parts of every interior voxel. Deterministic given the seed;
/// an absent peak_snr means no noise.
std::vector<std::complex<double>> add_noise(
    const std::vector<std::complex<double>>& field,
    const std::vector<std::uint8_t>& interior_mask,
    std::optional<double> peak_snr, std::uint64_t seed);

/// Rebuilds the availability mask: full keeps every interior voxel, half
/// drops the interior voxels on the selected side of the domain midpoint.
void apply_mask(SyntheticDataset& dataset, const MaskSpec& mask);

struct GenerateConfig {
  Grid grid;
  physics::PhysicsConstants constants;
  PhantomSpec phantom = PhantomSpec::four_compartment();
  Eigen::Vector3d incidence = Eigen::Vector3d(1, 0, 0);
  std::optional<double> peak_snr;
  std::uint64_t seed = 0;
  MaskSpec mask;
};

/// Phantom rasterization, forward solve, noise injection and masking in one
/// pass.
SyntheticDataset generate_dataset(const GenerateConfig& config,
                                  const SolverOptions& solver = {});

}  // namespace eptpinn::sim
