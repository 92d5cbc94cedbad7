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

#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "eptpinn/dataset.hpp"
#include "eptpinn/io.hpp"

using namespace eptpinn;
using namespace eptpinn::sim;

namespace {

const physics::PhysicsConstants kSevenTesla{297.2e6};

GenerateConfig small_config() {
  GenerateConfig cfg;
  cfg.grid = Grid::centered_cube(17, 0.14);
  cfg.constants = kSevenTesla;
  cfg.peak_snr = 100.0;
  cfg.seed = 77;
  return cfg;
}

}  // namespace

TEST_CASE("absent peak SNR leaves the field unchanged") {
  std::vector<std::complex<double>> field = {{1.0, 2.0}, {0.5, -0.25}};
  std::vector<std::uint8_t> mask = {1, 1};
  const auto noisy = add_noise(field, mask, std::nullopt, 42);
  CHECK(noisy == field);
}

TEST_CASE("noise statistics match the peak SNR definition") {
  // Constant unit field over a large all-interior block: the complex noise
  // magnitude should have std sigma_n = max|field| / peak_snr.
  const std::size_t n = 125000;
  std::vector<std::complex<double>> field(n, {2.0, 0.0});
  std::vector<std::uint8_t> mask(n, 1);
  const double peak_snr = 100.0;
  const auto noisy = add_noise(field, mask, peak_snr, 2026);

  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum_sq += std::norm(noisy[i] - field[i]);
  }
  const double measured = std::sqrt(sum_sq / n);
  const double sigma_n = 2.0 / peak_snr;
  CHECK(std::abs(measured - sigma_n) / sigma_n <= 0.02);
}

TEST_CASE("noise is split evenly between quadrature components") {
  const std::size_t n = 125000;
  std::vector<std::complex<double>> field(n, {1.0, 0.0});
  std::vector<std::uint8_t> mask(n, 1);
  const auto noisy = add_noise(field, mask, 20.0, 7);
  double re_sq = 0.0, im_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = noisy[i] - field[i];
    re_sq += d.real() * d.real();
    im_sq += d.imag() * d.imag();
  }
  const double component_var = (1.0 / 20.0) * (1.0 / 20.0) / 2.0;
  CHECK(std::abs(re_sq / n - component_var) / component_var <= 0.03);
  CHECK(std::abs(im_sq / n - component_var) / component_var <= 0.03);
}

TEST_CASE("noise is deterministic given the seed and masked to the interior") {
  std::vector<std::complex<double>> field = {{1, 0}, {1, 0}, {1, 0}};
  std::vector<std::uint8_t> mask = {1, 0, 1};
  const auto a = add_noise(field, mask, 10.0, 5);
  const auto b = add_noise(field, mask, 10.0, 5);
  CHECK(a == b);
  CHECK(a[1] == field[1]);  // untouched outside the interior
  CHECK(a[0] != field[0]);

  const auto c = add_noise(field, mask, 10.0, 6);
  CHECK(a != c);
}

TEST_CASE("full mask equals the interior mask") {
  auto cfg = small_config();
  cfg.peak_snr.reset();
  auto ds = generate_dataset(cfg);
  CHECK(ds.availability_mask == ds.interior_mask);
}

TEST_CASE("half-volume mask drops half the interior") {
  auto cfg = small_config();
  cfg.peak_snr.reset();
  auto ds = generate_dataset(cfg);
  const auto interior = ds.interior_count();

  MaskSpec half;
  half.kind = MaskKind::kHalf;
  half.axis = 0;
  half.upper = true;
  apply_mask(ds, half);
  const auto available = ds.available_count();

  // Interior voxels sitting exactly on the midpoint plane stay available on
  // both sides; on this odd grid that is the largest voxel layer.
  const Grid& g = ds.grid;
  const double mid = g.origin[0] + 0.5 * g.extent()[0];
  Eigen::Index central = 0;
  {
    Eigen::Index idx = 0;
    for (int kk = 0; kk < g.dims[2]; ++kk) {
      for (int jj = 0; jj < g.dims[1]; ++jj) {
        for (int ii = 0; ii < g.dims[0]; ++ii, ++idx) {
          if (ds.interior_mask[idx] && g.point(ii, jj, kk)[0] == mid) ++central;
        }
      }
    }
  }
  // Within one voxel layer of an exact half.
  CHECK(std::abs(available - interior / 2.0) <= static_cast<double>(central));

  // Dropped voxels all sit on the upper-x side.
  Eigen::Index idx = 0;
  for (int kk = 0; kk < g.dims[2]; ++kk) {
    for (int jj = 0; jj < g.dims[1]; ++jj) {
      for (int ii = 0; ii < g.dims[0]; ++ii, ++idx) {
        if (ds.interior_mask[idx] && !ds.availability_mask[idx]) {
          CHECK(g.point(ii, jj, kk)[0] > mid);
        }
      }
    }
  }

  // The two half masks partition the interior up to the shared midplane.
  MaskSpec lower = half;
  lower.upper = false;
  apply_mask(ds, lower);
  CHECK(ds.available_count() + available == interior + central);
}

TEST_CASE("generated dataset is valid and reproducible") {
  const auto cfg = small_config();
  const auto a = generate_dataset(cfg);
  const auto b = generate_dataset(cfg);
  CHECK(a.noisy_field == b.noisy_field);
  CHECK(a.field == b.field);
  a.validate();
  CHECK(a.interior_count() > 0);
  CHECK(a.available_count() == a.interior_count());
  CHECK(a.scale_factor == 1.0);

  // Noise actually perturbs interior voxels.
  bool any_diff = false;
  for (std::size_t i = 0; i < a.field.size(); ++i) {
    if (a.interior_mask[i] && a.noisy_field[i] != a.field[i]) any_diff = true;
  }
  CHECK(any_diff);
}

TEST_CASE("dataset file roundtrip is bitwise") {
  auto cfg = small_config();
  cfg.mask.kind = MaskKind::kHalf;
  cfg.mask.axis = 0;
  const auto ds = generate_dataset(cfg);

  const auto path = std::filesystem::temp_directory_path() / "roundtrip.eptd";
  io::write_dataset(path.string(), ds);
  const auto back = io::read_dataset(path.string());
  std::filesystem::remove(path);

  CHECK(back.grid.dims == ds.grid.dims);
  CHECK(back.grid.spacing == ds.grid.spacing);
  CHECK(back.grid.origin == ds.grid.origin);
  CHECK(back.constants.frequency_hz == ds.constants.frequency_hz);
  CHECK(back.field == ds.field);
  CHECK(back.noisy_field == ds.noisy_field);
  CHECK(back.interior_mask == ds.interior_mask);
  CHECK(back.availability_mask == ds.availability_mask);
  CHECK(back.eps_r_truth == ds.eps_r_truth);
  CHECK(back.sigma_truth == ds.sigma_truth);
  CHECK(back.scale_factor == ds.scale_factor);
  CHECK(back.peak_snr == ds.peak_snr);
  CHECK(back.noise_seed == ds.noise_seed);
  CHECK(back.mask.kind == ds.mask.kind);
  CHECK(back.mask.axis == ds.mask.axis);
  CHECK(back.phantom.compartments.size() == ds.phantom.compartments.size());
}

TEST_CASE("reading a non-dataset file fails cleanly") {
  const auto path = std::filesystem::temp_directory_path() / "bogus.eptd";
  {
    std::FILE* f = std::fopen(path.string().c_str(), "wb");
    std::fputs("not a dataset", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(io::read_dataset(path.string()), std::runtime_error);
  std::filesystem::remove(path);
}
