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

#include "eptpinn/phantom.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace eptpinn::sim {

bool Cylinder::contains(const Eigen::Vector3d& p) const {
  if (std::abs(p[2] - center[2]) > 0.5 * height) return false;
  const double dx = p[0] - center[0];
  const double dy = p[1] - center[1];
  return dx * dx + dy * dy <= radius * radius;
}

void PhantomSpec::validate() const {
  if (!(outer.radius > 0.0) || !(outer.height > 0.0)) {
    throw std::invalid_argument("PhantomSpec: outer cylinder is degenerate");
  }
  for (const Cylinder& c : compartments) {
    if (!(c.radius > 0.0) || !(c.height > 0.0)) {
      throw std::invalid_argument("PhantomSpec: degenerate compartment");
    }
    const double lateral =
        (c.center.head<2>() - outer.center.head<2>()).norm() + c.radius;
    // Strict lateral containment; flush axial extent is fine (the default
    // compartments run the full height of the phantom).
    if (!(lateral < outer.radius)) {
      throw std::invalid_argument(
          "PhantomSpec: compartment not strictly inside the outer cylinder");
    }
    const double zlo = c.center[2] - 0.5 * c.height;
    const double zhi = c.center[2] + 0.5 * c.height;
    if (zlo < outer.center[2] - 0.5 * outer.height - 1e-12 ||
        zhi > outer.center[2] + 0.5 * outer.height + 1e-12) {
      throw std::invalid_argument(
          "PhantomSpec: compartment extends beyond the outer cylinder axially");
    }
  }
}

std::pair<double, double> PhantomSpec::props_at(const Eigen::Vector3d& p) const {
  if (!outer.contains(p)) return {1.0, 0.0};  // air
  double eps_r = outer.eps_r;
  double sigma = outer.sigma;
  for (const Cylinder& c : compartments) {
    if (c.contains(p)) {
      eps_r = c.eps_r;
      sigma = c.sigma;
    }
  }
  return {eps_r, sigma};
}

PhantomSpec PhantomSpec::four_compartment() {
  PhantomSpec spec;
  spec.outer = {Eigen::Vector3d::Zero(), 0.060, 0.120, 56.0, 0.69};
  const double ring = 0.030;
  const double eps_r[3] = {51.0, 65.0, 76.0};
  const double sigma[3] = {0.56, 0.84, 1.02};
  for (int i = 0; i < 3; ++i) {
    const double angle = 2.0 * std::numbers::pi * i / 3.0;
    Cylinder c;
    c.center = Eigen::Vector3d(ring * std::cos(angle), ring * std::sin(angle), 0.0);
    c.radius = 0.015;
    c.height = 0.120;
    c.eps_r = eps_r[i];
    c.sigma = sigma[i];
    spec.compartments.push_back(c);
  }
  return spec;
}

void Grid::validate() const {
  for (int d = 0; d < 3; ++d) {
    if (dims[d] < 3) {
      throw std::invalid_argument("Grid: dims must be >= 3 per axis");
    }
    if (!(spacing[d] > 0.0)) {
      throw std::invalid_argument("Grid: spacing must be > 0");
    }
  }
}

physics::CoordinateMap Grid::coordinate_map() const {
  physics::CoordinateMap map;
  map.lo = origin;
  map.hi = origin + extent();
  return map;
}

Grid Grid::centered_cube(int n, double edge) {
  Grid g;
  g.dims = Eigen::Vector3i(n, n, n);
  g.spacing = Eigen::Vector3d::Constant(edge / (n - 1));
  g.origin = Eigen::Vector3d::Constant(-0.5 * edge);
  return g;
}

RasterizedPhantom rasterize_phantom(const PhantomSpec& spec, const Grid& grid,
                                    const physics::PhysicsConstants& k) {
  spec.validate();
  grid.validate();
  const Eigen::Index n = grid.size();
  RasterizedPhantom out;
  out.eps_c.resize(n);
  out.interior.resize(n);
  out.eps_r.resize(n);
  out.sigma.resize(n);

  Eigen::Index idx = 0;
  for (int kk = 0; kk < grid.dims[2]; ++kk) {
    for (int jj = 0; jj < grid.dims[1]; ++jj) {
      for (int ii = 0; ii < grid.dims[0]; ++ii, ++idx) {
        const Eigen::Vector3d p = grid.point(ii, jj, kk);
        const auto [eps_r, sigma] = spec.props_at(p);
        out.interior[idx] = spec.outer.contains(p) ? 1 : 0;
        out.eps_r[idx] = eps_r;
        out.sigma[idx] = sigma;
        const auto eps = physics::complex_permittivity(eps_r, sigma, k);
        out.eps_c[idx] = eps.as_complex();
      }
    }
  }
  return out;
}

}  // namespace eptpinn::sim
