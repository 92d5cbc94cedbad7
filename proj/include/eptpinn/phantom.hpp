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
#include <cstdint>
#include <vector>

#include "eptpinn/physics.hpp"

namespace eptpinn::sim {

/// Axis-aligned cylinder (axis along z) carrying one compartment's
/// electrical properties.
struct Cylinder {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double radius = 0.0;   // m
  double height = 0.0;   // m
  double eps_r = 1.0;
  double sigma = 0.0;    // S/m

  bool contains(const Eigen::Vector3d& p) const;
};

/// Cylindrical phantom: an outer cylinder carrying the background
/// compartment, plus inner compartments that override it (later entries win
/// on overlap). Outside the outer cylinder is air.
struct PhantomSpec {
  Cylinder outer;
  std::vector<Cylinder> compartments;

  /// Rejects compartments that protrude laterally or axially out of the
  /// outer cylinder (flush axial extent is allowed).
  void validate() const;

  /// (eps_r, sigma) at a physical point; air (1, 0) outside.
  std::pair<double, double> props_at(const Eigen::Vector3d& p) const;

  /// The four-compartment geometry used throughout: 60 mm outer cylinder,
  /// three 15 mm inner cylinders at 120 degree spacing on a 30 mm circle.
  static PhantomSpec four_compartment();
};

/// Regular grid of points; x-fastest linear indexing.
struct Grid {
  Eigen::Vector3i dims = Eigen::Vector3i::Zero();
  Eigen::Vector3d spacing = Eigen::Vector3d::Zero();  // m
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();   // m, first point

  void validate() const;
  Eigen::Index size() const {
    return static_cast<Eigen::Index>(dims[0]) * dims[1] * dims[2];
  }
  Eigen::Index index(int i, int j, int k) const {
    return i + static_cast<Eigen::Index>(dims[0]) * (j + static_cast<Eigen::Index>(dims[1]) * k);
  }
  Eigen::Vector3d point(int i, int j, int k) const {
    return origin + Eigen::Vector3d(i * spacing[0], j * spacing[1], k * spacing[2]);
  }
  Eigen::Vector3d extent() const {
    return Eigen::Vector3d((dims[0] - 1) * spacing[0], (dims[1] - 1) * spacing[1],
                           (dims[2] - 1) * spacing[2]);
  }
  physics::CoordinateMap coordinate_map() const;

  /// n^3 points spanning a cube of the given edge length centered at the
  /// origin.
  static Grid centered_cube(int n, double edge);
};

struct RasterizedPhantom {
  std::vector<std::complex<double>> eps_c;   // per grid point
  std::vector<std::uint8_t> interior;        // inside the outer cylinder
  std::vector<double> eps_r;
  std::vector<double> sigma;
};

/// Point-in-cylinder test at every grid point; complex permittivity from
/// the physics conversion at the given frequency.
RasterizedPhantom rasterize_phantom(const PhantomSpec& spec, const Grid& grid,
                                    const physics::PhysicsConstants& k);

}  // namespace eptpinn::sim
