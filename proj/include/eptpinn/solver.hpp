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
#include <functional>
#include <stdexcept>
#include <vector>

#include "eptpinn/phantom.hpp"

namespace eptpinn::sim {

struct SolverOptions {
  double tolerance = 1e-10;       // relative residual target (iterative path)
  int max_iterations = 6000;
  // Up to 33^3 nodes the system is factorized directly (with one step of
  // iterative refinement); larger grids use BiCGSTAB with an ILUT
  // preconditioner.
  Eigen::Index direct_max_nodes = 35937;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& msg, double residual)
      : std::runtime_error(msg), residual_(residual) {}
  double final_residual() const { return residual_; }

 private:
  double residual_;
};

struct HelmholtzSolution {
  std::vector<std::complex<double>> field;  // every grid point
  double relative_residual = 0.0;           // ||Au - b|| / ||b||
  bool used_direct = false;
};

/// Solves the discrete Helmholtz equation lap_h(u) + k0^2 eps_c u = 0 with
/// the 7-point second-order stencil at all inner grid nodes, with Dirichlet
/// values u = exp(-i k0 d.r) on the outer shell (d the unit incidence
/// direction of the exciting plane wave).
HelmholtzSolution solve_helmholtz_fd(const std::vector<std::complex<double>>& eps_c,
                                     const Grid& grid,
                                     const physics::PhysicsConstants& k,
                                     const Eigen::Vector3d& incidence,
                                     const SolverOptions& options = {});

/// Same discrete problem with arbitrary Dirichlet data on the shell.
HelmholtzSolution solve_helmholtz_dirichlet(
    const std::vector<std::complex<double>>& eps_c, const Grid& grid,
    const physics::PhysicsConstants& k,
    const std::function<std::complex<double>(const Eigen::Vector3d&)>& boundary,
    const SolverOptions& options = {});

/// Max over inner nodes of |lap_h(u) + k0^2 eps_c u|; the discrete
/// self-consistency measure of a solution.
double max_stencil_residual(const std::vector<std::complex<double>>& eps_c,
                            const Grid& grid,
                            const physics::PhysicsConstants& k,
                            const std::vector<std::complex<double>>& field);

}  // namespace eptpinn::sim
