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

#include "eptpinn/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "eptpinn/batch.hpp"

namespace eptpinn::eval {

namespace {

template <typename T>
double pnae_impl(std::span<const T> pred, std::span<const T> truth,
                 std::span<const std::uint8_t> mask) {
  if (pred.size() != truth.size() || pred.size() != mask.size()) {
    throw std::invalid_argument("pnae: size mismatch");
  }
  double peak = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (!mask[i]) continue;
    peak = std::max(peak, std::abs(truth[i]));
    ++count;
  }
  if (count == 0) {
    throw std::invalid_argument("pnae: empty mask");
  }
  if (!(peak > 0.0)) {
    throw std::invalid_argument("pnae: zero peak over the mask");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (!mask[i]) continue;
    sum += std::abs(pred[i] - truth[i]);
  }
  return 100.0 * sum / (static_cast<double>(count) * peak);
}

}  // namespace

double pnae(std::span<const double> pred, std::span<const double> truth,
            std::span<const std::uint8_t> mask) {
  return pnae_impl(pred, truth, mask);
}

double pnae(std::span<const std::complex<double>> pred,
            std::span<const std::complex<double>> truth,
            std::span<const std::uint8_t> mask) {
  return pnae_impl(pred, truth, mask);
}

SampledMaps sample_networks(const net::MlpParams& field_params,
                            const net::MlpParams& eps_params,
                            double field_scale, const sim::Grid& grid,
                            const physics::CoordinateMap& map,
                            const physics::PhysicsConstants& k) {
  grid.validate();
  if (!(field_scale > 0.0)) {
    throw std::invalid_argument("sample_networks: field_scale must be > 0");
  }

  const Eigen::Index n = grid.size();
  Eigen::MatrixX3d pts(n, 3);
  Eigen::Index row = 0;
  for (int kk = 0; kk < grid.dims[2]; ++kk) {
    for (int jj = 0; jj < grid.dims[1]; ++jj) {
      for (int ii = 0; ii < grid.dims[0]; ++ii, ++row) {
        const Eigen::Vector3d p = map.to_normalized(grid.point(ii, jj, kk));
        if (p.cwiseAbs().maxCoeff() > 1.0 + 1e-9) {
          throw std::invalid_argument(
              "sample_networks: grid point outside the normalized cube");
        }
        pts.row(row) = p.transpose();
      }
    }
  }

  const Eigen::MatrixXd b1_out = net::batch_forward(field_params, pts);
  const Eigen::MatrixXd eps_out = net::batch_forward(eps_params, pts);

  SampledMaps maps;
  maps.b1.resize(n);
  maps.eps_r.resize(n);
  maps.sigma.resize(n);
  const double inv_scale = 1.0 / field_scale;
  for (Eigen::Index i = 0; i < n; ++i) {
    maps.b1[i] = std::complex<double>(b1_out(i, 0), b1_out(i, 1)) * inv_scale;
    const auto [er, sg] =
        physics::eps_to_props({eps_out(i, 0), eps_out(i, 1)}, k);
    maps.eps_r[i] = er;
    maps.sigma[i] = sg;
  }
  return maps;
}

namespace {

void slice_axes(int axis, int& row_axis, int& col_axis) {
  switch (axis) {
    case 0: row_axis = 2; col_axis = 1; break;
    case 1: row_axis = 2; col_axis = 0; break;
    case 2: row_axis = 1; col_axis = 0; break;
    default:
      throw std::invalid_argument("slice: axis must be 0, 1 or 2");
  }
}

template <typename T, typename Fn>
std::vector<double> slice_impl(std::span<const T> map, const sim::Grid& grid,
                               int axis, int index, Fn&& convert) {
  grid.validate();
  if (static_cast<Eigen::Index>(map.size()) != grid.size()) {
    throw std::invalid_argument("slice: map size mismatch");
  }
  int row_axis = 0, col_axis = 0;
  slice_axes(axis, row_axis, col_axis);
  if (index < 0 || index >= grid.dims[axis]) {
    throw std::out_of_range("slice: index out of range");
  }

  const int rows = grid.dims[row_axis];
  const int cols = grid.dims[col_axis];
  std::vector<double> out(static_cast<std::size_t>(rows) * cols);
  int ijk[3];
  ijk[axis] = index;
  for (int r = 0; r < rows; ++r) {
    ijk[row_axis] = r;
    for (int c = 0; c < cols; ++c) {
      ijk[col_axis] = c;
      out[static_cast<std::size_t>(r) * cols + c] =
          convert(map[grid.index(ijk[0], ijk[1], ijk[2])]);
    }
  }
  return out;
}

void write_csv(const std::vector<double>& values, int rows, int cols,
               const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("export_slice: cannot open " + path);
  }
  char buf[64];
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g",
                    values[static_cast<std::size_t>(r) * cols + c]);
      out << buf;
      if (c + 1 < cols) out << ',';
    }
    out << '\n';
  }
  if (!out.good()) {
    throw std::runtime_error("export_slice: write failed for " + path);
  }
}

}  // namespace

std::vector<double> slice_values(std::span<const double> map,
                                 const sim::Grid& grid, int axis, int index) {
  return slice_impl(map, grid, axis, index, [](double v) { return v; });
}

std::vector<double> slice_values(std::span<const std::complex<double>> map,
                                 const sim::Grid& grid, int axis, int index,
                                 SliceComponent component) {
  return slice_impl(map, grid, axis, index,
                    [component](const std::complex<double>& v) {
                      switch (component) {
                        case SliceComponent::kReal: return v.real();
                        case SliceComponent::kImag: return v.imag();
                        case SliceComponent::kPhase: return std::arg(v);
                        default: return std::abs(v);
                      }
                    });
}

void export_slice(std::span<const double> map, const sim::Grid& grid, int axis,
                  int index, const std::string& path) {
  int row_axis = 0, col_axis = 0;
  slice_axes(axis, row_axis, col_axis);
  write_csv(slice_values(map, grid, axis, index), grid.dims[row_axis],
            grid.dims[col_axis], path);
}

void export_slice(std::span<const std::complex<double>> map,
                  const sim::Grid& grid, int axis, int index,
                  SliceComponent component, const std::string& path) {
  int row_axis = 0, col_axis = 0;
  slice_axes(axis, row_axis, col_axis);
  write_csv(slice_values(map, grid, axis, index, component),
            grid.dims[row_axis], grid.dims[col_axis], path);
}

}  // namespace eptpinn::eval
